//! Monomial helpers shared by the reference elements.

/// Exponents `(a, b)` of all monomials `x^a y^b` with `a + b <= degree`,
/// grouped by total degree.
pub(crate) fn exponents(degree: usize) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for total in 0..=degree as i32 {
        for b in 0..=total {
            out.push((total - b, b));
        }
    }
    out
}

fn pow(x: f64, n: i32) -> f64 {
    if n <= 0 {
        1.0
    } else {
        x.powi(n)
    }
}

/// Values and first derivatives of each monomial at `p`.
pub(crate) fn eval(exps: &[(i32, i32)], p: [f64; 2], val: &mut [f64], dx: &mut [f64], dy: &mut [f64]) {
    let [x, y] = p;
    for (i, &(a, b)) in exps.iter().enumerate() {
        val[i] = pow(x, a) * pow(y, b);
        dx[i] = if a > 0 { a as f64 * pow(x, a - 1) * pow(y, b) } else { 0.0 };
        dy[i] = if b > 0 { b as f64 * pow(x, a) * pow(y, b - 1) } else { 0.0 };
    }
}

/// Shifted Legendre polynomial of degree `j` on `[0, 1]`.
pub fn shifted_legendre(j: usize, s: f64) -> f64 {
    let x = 2.0 * s - 1.0;
    let (mut p0, mut p1) = (1.0, x);
    if j == 0 {
        return 1.0;
    }
    for n in 1..j {
        let p2 = ((2 * n + 1) as f64 * x * p1 - n as f64 * p0) / (n + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}
