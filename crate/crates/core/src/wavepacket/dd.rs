//! Double-double DFT used for the handful of gap bins whose amplitudes get
//! multiplied by e^{cmT}; a plain FFT leaves ~1e-16 relative noise there.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    /// Product with a plain double.
    #[inline]
    fn mul_f(self, b: f64) -> Dd {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p) + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    fn div_f(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self.add(Dd::from(b).mul_f(q1).neg());
        let q2 = r.hi / b;
        let r = r.add(Dd::from(b).mul_f(q2).neg());
        let q3 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from(q3))
    }
}

const TWO_PI: Dd = Dd { hi: 6.283185307179586, lo: 2.4492935982947064e-16 };

#[derive(Debug, Clone, Copy)]
struct Cdd {
    re: Dd,
    im: Dd,
}

impl Cdd {
    #[inline]
    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(o.re).add(self.im.mul(o.im).neg()),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }
}

/// cos and sin of a double-double angle by Taylor series; |x| <= pi.
fn cos_sin(x: Dd) -> (Dd, Dd) {
    let x2 = x.mul(x);
    let mut cos = Dd::from(1.0);
    let mut sin = x;
    let mut term_c = Dd::from(1.0);
    let mut term_s = x;
    let mut k = 1.0;
    loop {
        term_c = term_c.mul(x2).neg().div_f((2.0 * k - 1.0) * (2.0 * k));
        term_s = term_s.mul(x2).neg().div_f((2.0 * k) * (2.0 * k + 1.0));
        cos = cos.add(term_c);
        sin = sin.add(term_s);
        if term_c.hi.abs() < 1e-34 && term_s.hi.abs() < 1e-34 {
            break;
        }
        k += 1.0;
    }
    (cos, sin)
}

/// e^{-2 pi i m / n} for m = 0..n.
fn twiddles(n: usize) -> Vec<Cdd> {
    let theta = TWO_PI.div_f(n as f64).neg();
    let (c, s) = cos_sin(theta);
    let w = Cdd { re: c, im: s };
    let mut out = Vec::with_capacity(n);
    let mut cur = Cdd { re: Dd::from(1.0), im: Dd::ZERO };
    // restart from a directly evaluated value every 256 steps to keep drift at the dd level
    for m in 0..n {
        if m % 256 == 0 && m > 0 {
            let mut a = TWO_PI.mul_f(m as f64).div_f(n as f64);
            if a.hi > std::f64::consts::PI {
                a = a.add(TWO_PI.neg());
            }
            let (c, s) = cos_sin(a.neg());
            cur = Cdd { re: c, im: s };
        }
        out.push(cur);
        cur = cur.mul(w);
    }
    out
}

/// Compensated accumulator: exact products via fma, rounding errors summed
/// separately (twice-working-precision dot product).
#[derive(Default, Clone, Copy)]
struct Dot2 {
    s: f64,
    err: f64,
}

impl Dot2 {
    #[inline]
    fn push(&mut self, w: Dd, x: f64) {
        let p = w.hi * x;
        let pe = w.hi.mul_add(x, -p);
        let (s, se) = two_sum(self.s, p);
        self.s = s;
        self.err += pe + se + w.lo * x;
    }

    fn value(self) -> f64 {
        self.s + self.err
    }
}

/// Unnormalized DFT sum_j x_j e^{-2 pi i n j / N} for the requested bins,
/// accumulated in twice the working precision and rounded once at the end.
pub(crate) fn dft_bins(samples: &[Complex64], bins: &[usize]) -> Vec<Complex64> {
    let n = samples.len();
    if bins.is_empty() || n == 0 {
        return Vec::new();
    }
    let tw = twiddles(n);
    let nz: Vec<(usize, Complex64)> =
        samples.iter().copied().enumerate().filter(|(_, z)| z.re != 0.0 || z.im != 0.0).collect();
    bins.iter()
        .map(|&b| {
            let mut re = Dot2::default();
            let mut im = Dot2::default();
            for &(j, z) in &nz {
                let w = tw[(b * j) % n];
                re.push(w.re, z.re);
                re.push(w.im.neg(), z.im);
                im.push(w.im, z.re);
                im.push(w.re, z.im);
            }
            Complex64::new(re.value(), im.value())
        })
        .collect()
}
