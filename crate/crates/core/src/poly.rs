//! Dense real polynomials: evaluation, real root isolation and discriminants.

/// Polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

/// Bisection stops once the bracket is narrower than this.
pub const ROOT_TOL: f64 = 1e-14;

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Poly {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// All real roots in the closed interval `[lo, hi]`, sorted.
    ///
    /// Roots are isolated recursively: between consecutive roots of the
    /// derivative the polynomial is monotone, so each piece holds at most one
    /// root, located by sign-change bisection. Even-multiplicity roots that
    /// do not produce a sign change are found only when they evaluate to an
    /// exact zero.
    pub fn real_roots_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        if self.is_zero() || self.degree() == 0 {
            return Vec::new();
        }
        if self.degree() == 1 {
            let r = -self.coeffs[0] / self.coeffs[1];
            return if (lo..=hi).contains(&r) { vec![r] } else { Vec::new() };
        }
        let mut knots = vec![lo];
        knots.extend(
            self.derivative()
                .real_roots_in(lo, hi)
                .into_iter()
                .filter(|&r| r > lo && r < hi),
        );
        knots.push(hi);

        let mut roots: Vec<f64> = Vec::new();
        let push = |r: f64, roots: &mut Vec<f64>| {
            if roots.last().is_none_or(|&last| r - last > ROOT_TOL) {
                roots.push(r);
            }
        };
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            if fa == 0.0 {
                push(a, &mut roots);
            } else if fb != 0.0 && fa.signum() != fb.signum() {
                push(bisect(|x| self.eval(x), a, b, fa), &mut roots);
            }
        }
        if self.eval(hi) == 0.0 {
            push(hi, &mut roots);
        }
        roots
    }

    /// Resultant of `self` and `other` via the Sylvester determinant.
    pub fn resultant(&self, other: &Poly) -> f64 {
        let (m, n) = (self.degree(), other.degree());
        let size = m + n;
        if size == 0 {
            return 1.0;
        }
        let mut mat = vec![vec![0.0; size]; size];
        // rows use descending coefficient order
        for r in 0..n {
            for (i, &c) in self.coeffs.iter().rev().enumerate() {
                mat[r][r + i] = c;
            }
        }
        for r in 0..m {
            for (i, &c) in other.coeffs.iter().rev().enumerate() {
                mat[n + r][r + i] = c;
            }
        }
        determinant(mat)
    }

    /// Discriminant, with the convention that polynomials of degree <= 1 have
    /// discriminant 1.
    pub fn discriminant(&self) -> f64 {
        let d = self.degree();
        if d <= 1 {
            return 1.0;
        }
        let lead = self.coeffs[d];
        let sign = if (d * (d - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * self.resultant(&self.derivative()) / lead
    }
}

/// Bisection on a bracket `[a, b]` with `f(a) = fa` of opposite sign to `f(b)`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    loop {
        let mid = 0.5 * (a + b);
        if b - a <= ROOT_TOL || mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    if f(a).abs() <= f(b).abs() {
        a
    } else {
        b
    }
}

fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            if factor != 0.0 {
                for k in col..n {
                    m[row][k] -= factor * m[col][k];
                }
            }
        }
    }
    det
}
