//! Inertia from the characteristic polynomial and Sturm sequences.
//!
//! Independent of the congruence route: the characteristic polynomial comes
//! from Faddeev–LeVerrier, zero eigenvalues from its trailing zero
//! coefficients, and the remaining real roots are counted on (0, ∞) and
//! (−∞, 0) per square-free factor so multiplicities are recovered. The
//! remainder sequences run on primitive integer polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::inertia::Inertia;
use super::matrix::Mat;
use super::rat::{primitive, Rat};
use super::LinalgError;

/// Dense univariate polynomial over ℚ, coefficients lowest degree first,
/// no trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn one() -> Self {
        Poly::new(vec![Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn lead(&self) -> &Rat {
        self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer((i as i64).into()))
                .collect(),
        )
    }

    /// Euclidean division `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let lead_inv = d.lead().recip();
        let mut q = vec![Rat::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() * &lead_inv;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            q[shift] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Rescales by a positive constant to a primitive integer polynomial.
    /// Signs at every point are preserved.
    fn normalized(&self) -> Poly {
        Poly::new(primitive(&self.coeffs))
    }

    fn monic(&self) -> Poly {
        let inv = self.lead().recip();
        Poly::new(self.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.normalized();
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

}

/// `det(λI − A)` by Faddeev–LeVerrier, run on the integer matrix `sA` where
/// `s` clears every denominator; the coefficients are scaled back at the end.
pub fn characteristic_polynomial(a: &Mat) -> Result<Poly, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let s = (0..n)
        .flat_map(|i| a.row(i))
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ai: Vec<Vec<BigInt>> = (0..n)
        .map(|i| a.row(i).iter().map(|x| x.numer() * (&s / x.denom())).collect())
        .collect();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    // M_1 = I, c_{n-1} = -tr(A); M_k = A M_{k-1} + c_{n-k+1} I.
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for k in 1..=n {
        if k > 1 {
            m = int_mul(&ai, &m);
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += &c[n - k + 1];
            }
        }
        let trace = (0..n).fold(BigInt::zero(), |acc, i| {
            acc + (0..n).fold(BigInt::zero(), |t, l| {
                if ai[i][l].is_zero() || m[l][i].is_zero() {
                    t
                } else {
                    t + &ai[i][l] * &m[l][i]
                }
            })
        });
        c[n - k] = -trace / BigInt::from(k);
    }
    // c belongs to sA; the coefficient of λ^j for A is c_j / s^(n-j).
    let mut coeffs = vec![Rat::zero(); n + 1];
    let mut power = BigInt::one();
    for j in (0..=n).rev() {
        coeffs[j] = Rat::new(std::mem::take(&mut c[j]), power.clone());
        power *= &s;
    }
    Ok(Poly::new(coeffs))
}

fn int_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

// Integer polynomials, lowest degree first, kept primitive. Every operation
// below is invariant under positive rescaling, which is all the root counts
// and the multiplicity split need.

type IPoly = Vec<BigInt>;

fn trim(mut p: IPoly) -> IPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Divides out the positive content; signs are unchanged.
fn primitive_part(p: IPoly) -> IPoly {
    // Smallest coefficients first: the running gcd usually collapses to 1
    // before the large ones are touched.
    let mut order: Vec<&BigInt> = p.iter().filter(|x| !x.is_zero()).collect();
    order.sort_by_key(|x| x.bits());
    let mut g = BigInt::zero();
    for x in order {
        g = g.gcd(x);
        if g.is_one() {
            return p;
        }
    }
    if g.is_zero() || g.is_one() {
        p
    } else {
        p.into_iter().map(|x| x / &g).collect()
    }
}

fn to_ipoly(p: &Poly) -> IPoly {
    trim(super::rat::primitive_integers(&p.coeffs))
}

fn from_ipoly(p: &IPoly) -> Poly {
    Poly::new(p.iter().cloned().map(Rat::from_integer).collect())
}

fn ideg(p: &IPoly) -> usize {
    p.len().saturating_sub(1)
}

fn iderivative(p: &IPoly) -> IPoly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

/// Pseudo-remainder: `lc(b)^(δ+1) a = q b + r` with `δ = deg a − deg b`.
/// Returns `r` and the sign of the multiplier `lc(b)^(δ+1)`.
fn prem(a: &IPoly, b: &IPoly) -> (IPoly, i8) {
    let db = ideg(b);
    let lead = b.last().expect("nonzero divisor").clone();
    let mut r = a.clone();
    let mut steps = 0;
    while !r.is_empty() && ideg(&r) >= db {
        let shift = ideg(&r) - db;
        let f = r.last().unwrap().clone();
        for x in r.iter_mut() {
            *x *= &lead;
        }
        for (i, c) in b.iter().enumerate() {
            if !c.is_zero() {
                r[shift + i] -= &f * c;
            }
        }
        steps += 1;
        r = trim(r);
    }
    // Pad to exactly δ+1 multiplications so the sign is predictable.
    let delta = ideg(a).saturating_sub(db) + 1;
    for _ in steps..delta {
        for x in r.iter_mut() {
            *x *= &lead;
        }
    }
    let sign = if lead.is_negative() && delta % 2 == 1 { -1 } else { 1 };
    (r, sign)
}

/// Exact quotient when `b` divides `a`; integral by Gauss's lemma because
/// `b` is primitive.
fn iexact_div(a: &IPoly, b: &IPoly) -> IPoly {
    let db = ideg(b);
    let lead = b.last().expect("nonzero divisor");
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); ideg(a).saturating_sub(db) + 1];
    while !r.is_empty() && ideg(&r) >= db {
        let shift = ideg(&r) - db;
        let (f, rem) = r.last().unwrap().div_rem(lead);
        debug_assert!(rem.is_zero(), "inexact polynomial division");
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r = trim(r);
    }
    debug_assert!(r.is_empty(), "inexact polynomial division");
    trim(q)
}

/// Primes for the modular coprimality pre-check.
const CHECK_PRIMES: [u64; 4] = [(1 << 61) - 1, 1_000_000_007, 998_244_353, 1_000_000_009];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn reduce_mod(f: &IPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out: Vec<u64> = f
        .iter()
        .map(|c| {
            let r = c.mod_floor(&pb);
            r.to_u64_digits().1.first().copied().unwrap_or(0)
        })
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Degree of `gcd(a, b)` over `𝔽_p`; `None` when both vanish.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Option<usize> {
    while !b.is_empty() {
        // a ← a mod b
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().unwrap(), inv, p);
            let shift = a.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - mul_mod(f, c, p)) % p;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    (!a.is_empty()).then(|| a.len() - 1)
}

/// `true` only if `f` and `g` are certainly coprime over ℚ. A common factor
/// over ℚ survives reduction modulo any prime not dividing `lc(f)`.
fn certainly_coprime(f: &IPoly, g: &IPoly) -> bool {
    for &p in &CHECK_PRIMES {
        let fp = reduce_mod(f, p);
        if fp.len() != f.len() {
            continue;
        }
        return gcd_degree_mod(fp, reduce_mod(g, p), p) == Some(0);
    }
    false
}

/// Primitive gcd with positive leading coefficient.
fn igcd(a: &IPoly, b: &IPoly) -> IPoly {
    let (mut a, mut b) = (primitive_part(a.clone()), primitive_part(b.clone()));
    while !b.is_empty() {
        let r = primitive_part(prem(&a, &b).0);
        a = b;
        b = r;
    }
    if a.last().is_some_and(Signed::is_negative) {
        a = a.into_iter().map(|x| -x).collect();
    }
    a
}

fn isign(x: Option<&BigInt>) -> i8 {
    match x {
        Some(x) if x.is_positive() => 1,
        Some(x) if x.is_negative() => -1,
        _ => 0,
    }
}

/// Sturm chain `f, f', −rem(f, f'), …` with every member a positive multiple
/// of the Euclidean one. Coefficient growth is held down by the subresultant
/// recurrence: each pseudo-remainder is divided exactly by `g·h^δ`, taken
/// positive here so signs are untouched.
fn sturm_chain(f: &IPoly) -> Vec<IPoly> {
    let mut chain = vec![primitive_part(f.clone()), primitive_part(iderivative(f))];
    if chain[1].is_empty() {
        chain.pop();
        return chain;
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        let delta = ideg(a) - ideg(b);
        let (r, s) = prem(a, b);
        if r.is_empty() {
            break;
        }
        let divisor = &g * h.pow(delta as u32);
        let next: IPoly = r
            .into_iter()
            .map(|x| {
                let (q, rem) = x.div_rem(&divisor);
                debug_assert!(rem.is_zero(), "subresultant division is exact");
                // −rem has the sign of −s·prem.
                if s > 0 {
                    -q
                } else {
                    q
                }
            })
            .collect();
        g = chain[n - 1].last().expect("nonzero").abs();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g.pow(d as u32) / h.pow(d as u32 - 1),
        };
        chain.push(next);
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Distinct real roots of `f` in (0, ∞) and (−∞, 0). Requires `f(0) ≠ 0`.
fn count_signed_roots(f: &IPoly) -> (usize, usize) {
    let chain = sturm_chain(f);
    let at_zero = sign_changes(chain.iter().map(|p| isign(p.first())));
    let at_pos = sign_changes(chain.iter().map(|p| isign(p.last())));
    let at_neg = sign_changes(chain.iter().map(|p| {
        let s = isign(p.last());
        if ideg(p) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    (at_zero - at_pos, at_neg - at_zero)
}

/// Musser's square-free split: returns `(fᵢ, i)` with `f = c·∏ fᵢ^i`, each
/// `fᵢ` primitive with positive leading coefficient. Uses only gcds and exact
/// quotients, so it is unaffected by the scaling of intermediate results.
fn isquare_free(f: &IPoly) -> Vec<(IPoly, usize)> {
    let mut out = Vec::new();
    if ideg(f) == 0 {
        return out;
    }
    let df = iderivative(f);
    if certainly_coprime(f, &df) {
        let mut f = primitive_part(f.clone());
        if f.last().is_some_and(Signed::is_negative) {
            f = f.into_iter().map(|x| -x).collect();
        }
        return vec![(f, 1)];
    }
    let mut g = igcd(f, &df);
    let mut c = iexact_div(&primitive_part(f.clone()), &g);
    let mut i = 1;
    while ideg(&c) > 0 {
        let y = igcd(&c, &g);
        let factor = iexact_div(&c, &y);
        if ideg(&factor) > 0 {
            let factor = if factor.last().is_some_and(Signed::is_negative) {
                factor.into_iter().map(|x| -x).collect()
            } else {
                factor
            };
            out.push((factor, i));
        }
        g = iexact_div(&g, &y);
        c = y;
        i += 1;
    }
    out
}

/// Square-free decomposition over ℚ: `(fᵢ, i)` with `f = c·∏ fᵢ^i`, each factor
/// a primitive integer polynomial with positive leading coefficient.
pub fn square_free_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    isquare_free(&to_ipoly(f))
        .iter()
        .map(|(p, i)| (from_ipoly(p), *i))
        .collect()
}

/// Inertia of a symmetric matrix from its characteristic polynomial.
pub fn inertia_sturm(a: &Mat) -> Result<Inertia, LinalgError> {
    if !a.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let chi = characteristic_polynomial(a)?;
    let z = chi.coeffs.iter().take_while(|c| c.is_zero()).count();
    let reduced = to_ipoly(&Poly::new(chi.coeffs[z..].to_vec()));
    let mut inertia = Inertia::new(0, 0, z);
    for (factor, mult) in isquare_free(&reduced) {
        let (pos, neg) = count_signed_roots(&factor);
        inertia.p += pos * mult;
        inertia.q += neg * mult;
    }
    Ok(inertia)
}

#[cfg(test)]
mod tests {
    use super::super::rat::rat;
    use super::*;

    fn p(xs: &[i64]) -> Poly {
        Poly::new(xs.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn char_poly() {
        let a = Mat::from_i64(&[&[2, 1], &[1, 2]]);
        assert_eq!(characteristic_polynomial(&a).unwrap(), p(&[3, -4, 1]));
        let b = Mat::from_i64(&[&[1, 2, 0], &[2, 1, 0], &[0, 0, 5]]);
        // (λ²−2λ−3)(λ−5)
        assert_eq!(characteristic_polynomial(&b).unwrap(), p(&[15, 7, -7, 1]));
    }

    #[test]
    fn examples() {
        let a = Mat::from_i64(&[&[1, 0, 0], &[0, -2, 0], &[0, 0, 3]]);
        assert_eq!(inertia_sturm(&a).unwrap(), Inertia::new(2, 1, 0));
        let b = Mat::from_i64(&[&[2, 1], &[1, 2]]);
        assert_eq!(inertia_sturm(&b).unwrap(), Inertia::new(2, 0, 0));
        let c = Mat::from_i64(&[&[1, 2], &[2, 1]]);
        assert_eq!(inertia_sturm(&c).unwrap(), Inertia::new(1, 1, 0));
        assert_eq!(inertia_sturm(&Mat::zeros(3, 3)).unwrap(), Inertia::new(0, 0, 3));
    }

    #[test]
    fn repeated_eigenvalues() {
        // eigenvalues 2, -1, -1
        let a = Mat::from_i64(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(inertia_sturm(&a).unwrap(), Inertia::new(1, 2, 0));
        let d = Mat::from_i64(&[&[3, 0, 0, 0], &[0, 3, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 0]]);
        assert_eq!(inertia_sturm(&d).unwrap(), Inertia::new(2, 1, 1));
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^2 (x+2)^3 (x-3)
        let f = [p(&[-1, 1]), p(&[-1, 1]), p(&[2, 1]), p(&[2, 1]), p(&[2, 1]), p(&[-3, 1])]
            .iter()
            .fold(Poly::one(), |acc, g| mul(&acc, g));
        let parts = square_free_decomposition(&f);
        assert_eq!(parts, vec![(p(&[-3, 1]), 1), (p(&[-1, 1]), 2), (p(&[2, 1]), 3)]);
    }

    fn mul(a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![Rat::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Poly::new(out)
    }

    #[test]
    fn division() {
        let (q, r) = p(&[1, 0, 0, 1]).div_rem(&p(&[1, 1]));
        assert_eq!(q, p(&[1, -1, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[2, 0, 1]).div_rem(&p(&[0, 1]));
        assert_eq!(q, p(&[0, 1]));
        assert_eq!(r, p(&[2]));
    }

    fn from_roots(roots: &[i64]) -> Poly {
        roots.iter().fold(Poly::one(), |acc, &r| mul(&acc, &p(&[-r, 1])))
    }

    #[test]
    fn modular_precheck() {
        let ip = |xs: &[i64]| -> IPoly { xs.iter().map(|&x| BigInt::from(x)).collect() };
        // (x-1)(x+2) and its derivative
        assert!(certainly_coprime(&ip(&[-2, 1, 1]), &ip(&[1, 2])));
        // (x-1)^2 shares x-1 with its derivative
        assert!(!certainly_coprime(&ip(&[1, -2, 1]), &ip(&[-2, 2])));
        // leading coefficient divisible by every check prime is skipped, not trusted
        let big = CHECK_PRIMES.iter().fold(BigInt::one(), |acc, &p| acc * p);
        assert!(!certainly_coprime(&vec![BigInt::from(-1), BigInt::zero(), big], &ip(&[0, 1])));
    }

    #[test]
    fn char_poly_matches_determinants() {
        use super::super::matrix::det;
        use super::super::rat::ratio;
        let a = Mat::from_rows(vec![
            vec![ratio(1, 2), rat(3), ratio(-2, 7)],
            vec![rat(3), rat(0), ratio(5, 3)],
            vec![ratio(-2, 7), ratio(5, 3), rat(-4)],
        ])
        .unwrap();
        let chi = characteristic_polynomial(&a).unwrap();
        for lambda in -2i64..=3 {
            let mut shifted = Mat::identity(3);
            for i in 0..3 {
                for j in 0..3 {
                    shifted[(i, j)] = shifted[(i, j)].clone() * rat(lambda) - a[(i, j)].clone();
                }
            }
            let value = chi
                .coeffs()
                .iter()
                .rev()
                .fold(Rat::zero(), |acc, c| acc * rat(lambda) + c);
            assert_eq!(value, det(&shifted).unwrap());
        }
    }

    proptest::proptest! {
        #[test]
        fn root_counts_match_known_roots(roots in proptest::collection::vec(-6i64..=6, 1..8), scale in -5i64..=5) {
            proptest::prop_assume!(scale != 0);
            let f = Poly::new(from_roots(&roots).coeffs().iter().map(|c| c * rat(scale)).collect());
            let parts = square_free_decomposition(&f);
            let degree: usize = parts.iter().map(|(g, i)| g.degree() * i).sum();
            proptest::prop_assert_eq!(degree, roots.len());
            let (mut pos, mut neg) = (0, 0);
            for (g, i) in &parts {
                let gi = to_ipoly(g);
                if gi[0].is_zero() {
                    // x itself; only its multiplicity matters here
                    let (pp, nn) = count_signed_roots(&iexact_div(&gi, &vec![BigInt::zero(), BigInt::one()]));
                    pos += pp * i;
                    neg += nn * i;
                } else {
                    let (pp, nn) = count_signed_roots(&gi);
                    pos += pp * i;
                    neg += nn * i;
                }
            }
            proptest::prop_assert_eq!(pos, roots.iter().filter(|&&r| r > 0).count());
            proptest::prop_assert_eq!(neg, roots.iter().filter(|&&r| r < 0).count());
        }
    }
}
