//! Factorisation of square-free primitive integer polynomials: factor modulo a small prime
//! (Cantor-Zassenhaus), lift the factors p-adically (Hensel), then recombine subsets and
//! keep those that divide exactly over `Z`.
//!
//! Coefficient vectors are little-endian, `v[i]` is the coefficient of `X^i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Zp = Vec<u64>;
type Zx = Vec<BigInt>;

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229,
    233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311, 313, 317, 331, 337, 347, 349, 353, 359,
    367, 373, 379, 383, 389, 397, 401, 409, 419, 421, 431, 433, 439, 443, 449, 457, 461, 463, 467, 479, 487, 491,
    499, 503, 509, 521, 523, 541, 547, 557, 563, 569, 571, 577, 587, 593, 599, 601, 607, 613, 617, 619, 631, 641,
    643, 647, 653, 659, 661, 673, 677, 683, 691, 701, 709, 719, 727, 733, 739, 743, 751, 757, 761, 769, 773, 787,
    797, 809, 811, 821, 823, 827, 829, 839, 853, 857, 859, 863, 877, 881, 883, 887, 907, 911, 919, 929, 937, 941,
    947, 953, 967, 971, 977, 983, 991, 997,
];

/// Good primes tried before settling on the one giving the fewest modular factors.
const CANDIDATE_PRIMES: usize = 5;

// ---- arithmetic in F_p[X] ----

fn trim_p(mut a: Zp) -> Zp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_p(a: u64, p: u64) -> u64 {
    pow_p(a, p - 2, p)
}

fn pow_p(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn add_p(a: &[u64], b: &[u64], p: u64) -> Zp {
    let n = a.len().max(b.len());
    trim_p((0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % p).collect())
}

fn sub_p(a: &[u64], b: &[u64], p: u64) -> Zp {
    let n = a.len().max(b.len());
    trim_p((0..n).map(|i| (a.get(i).unwrap_or(&0) + p - b.get(i).unwrap_or(&0)) % p).collect())
}

fn mul_p(a: &[u64], b: &[u64], p: u64) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim_p(out)
}

fn divrem_p(a: &Zp, b: &Zp, p: u64) -> (Zp, Zp) {
    let db = b.len() - 1;
    let inv = inv_p(*b.last().unwrap(), p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        if c != 0 {
            for (j, y) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * y % p) % p;
            }
        }
    }
    r.truncate(db);
    (trim_p(q), trim_p(r))
}

fn monic_p(a: &Zp, p: u64) -> Zp {
    let inv = inv_p(*a.last().unwrap(), p);
    a.iter().map(|c| c * inv % p).collect()
}

fn gcd_p(a: &Zp, b: &Zp, p: u64) -> Zp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = divrem_p(&a, &b, p).1;
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic_p(&a, p)
    }
}

/// `(g, s, t)` with `s a + t b = g`, `g` monic.
fn xgcd_p(a: &Zp, b: &Zp, p: u64) -> (Zp, Zp, Zp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem_p(&r0, &r1, p);
        let s = sub_p(&s0, &mul_p(&q, &s1, p), p);
        let t = sub_p(&t0, &mul_p(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
        (t0, t1) = (t1, t);
    }
    let inv = inv_p(*r0.last().unwrap(), p);
    let sc = |v: &Zp| trim_p(v.iter().map(|c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn powmod_p(base: &Zp, mut e: u64, m: &Zp, p: u64) -> Zp {
    let mut r = vec![1u64];
    let mut b = divrem_p(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = divrem_p(&mul_p(&r, &b, p), m, p).1;
        }
        b = divrem_p(&mul_p(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

fn derivative_p(a: &Zp, p: u64) -> Zp {
    trim_p(a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect())
}

/// Distinct-degree factorisation of a monic square-free `f`: pairs `(product, degree)`.
fn distinct_degree(f: &Zp, p: u64) -> Vec<(Zp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            out.push((f.clone(), f.len() - 1));
            break;
        }
        h = powmod_p(&h, p, &f, p);
        let g = gcd_p(&sub_p(&h, &x, p), &f, p);
        if g.len() > 1 {
            f = divrem_p(&f, &g, p).0;
            h = divrem_p(&h, &f, p).1;
            out.push((g, d));
        }
    }
    out
}

/// Equal-degree splitting of a product of irreducibles of degree `d` (odd `p`).
fn equal_degree(f: &Zp, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Zp>) {
    let n = f.len() - 1;
    if n == d {
        out.push(f.clone());
        return;
    }
    loop {
        let a: Zp = trim_p((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = sub_p(&powmod_p_big(&a, p, d, f), &[1], p);
        let g = gcd_p(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem_p(f, &g, p).0;
            equal_degree(&g, d, p, rng, out);
            equal_degree(&monic_p(&h, p), d, p, rng, out);
            return;
        }
    }
}

/// `a^((p^d - 1)/2) mod f`; the exponent can exceed `u64` so it is applied as
/// `a^(1 + p + ... + p^(d-1))` raised to `(p - 1)/2`.
fn powmod_p_big(a: &Zp, p: u64, d: usize, f: &Zp) -> Zp {
    let mut acc = vec![1u64];
    let mut cur = divrem_p(a, f, p).1;
    for _ in 0..d {
        acc = divrem_p(&mul_p(&acc, &cur, p), f, p).1;
        cur = powmod_p(&cur, p, f, p);
    }
    powmod_p(&acc, (p - 1) / 2, f, p)
}

fn factor_mod_p(f: &Zp, p: u64, rng: &mut ChaCha8Rng) -> Vec<Zp> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        equal_degree(&g, d, p, rng, &mut out);
    }
    out
}

// ---- integer polynomials ----

fn trim_z(mut a: Zx) -> Zx {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn mul_z(a: &Zx, b: &Zx) -> Zx {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_z(out)
}

fn to_p(a: &Zx, p: u64) -> Zp {
    let pb = BigInt::from(p);
    trim_p(a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn from_p(a: &Zp) -> Zx {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Symmetric residue of every coefficient modulo `m`.
fn symmetric(a: &Zx, m: &BigInt) -> Zx {
    let half = m / 2;
    trim_z(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn content(a: &Zx) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(a: &Zx) -> Zx {
    let c = content(a);
    let sign = if a.last().is_some_and(Signed::is_negative) { -BigInt::one() } else { BigInt::one() };
    a.iter().map(|x| x / &c * &sign).collect()
}

/// Exact quotient `a / b` over `Z`, if it exists.
fn exact_div_z(a: &Zx, b: &Zx) -> Option<Zx> {
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r = a.clone();
    if r.len() <= db {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
    }
    r.iter().all(Zero::is_zero).then_some(q)
}

/// Lifts `f = lc(f) * g * h mod p` with `g` monic to the same identity modulo `p^k >= bound`.
fn hensel_two(f: &Zx, g: &Zp, h: &Zp, p: u64, bound: &BigInt) -> (Zx, Zx, BigInt) {
    let lc = f.last().unwrap().clone();
    let mut gz = from_p(g);
    // h carries the leading coefficient of f
    let mut hz = {
        let hm = mul_p(h, &[lc.mod_floor(&BigInt::from(p)).to_u64().unwrap()], p);
        let mut v = from_p(&hm);
        *v.last_mut().unwrap() = lc.clone();
        v
    };
    let (_, s, t) = xgcd_p(g, &to_p(&hz, p), p);
    let mut m = BigInt::from(p);
    while &m < bound {
        let diff = trim_z(
            (0..f.len())
                .map(|i| f[i].clone() - mul_z(&gz, &hz).get(i).cloned().unwrap_or_default())
                .collect(),
        );
        let diff: Zx = diff.iter().map(|c| c / &m).collect();
        let e = to_p(&diff, p);
        if !e.is_empty() {
            let te = mul_p(&t, &e, p);
            let (q, r) = divrem_p(&te, g, p);
            let dh = add_p(&mul_p(&s, &e, p), &mul_p(&q, &to_p(&hz, p), p), p);
            for (i, c) in r.iter().enumerate() {
                gz[i] += &m * BigInt::from(*c);
            }
            for (i, c) in dh.iter().enumerate() {
                if i < hz.len() {
                    hz[i] += &m * BigInt::from(*c);
                }
            }
        }
        m *= p;
    }
    (symmetric(&gz, &m), symmetric(&hz, &m), m)
}

/// Lifts all monic modular factors of `f`; returns them modulo the returned modulus.
fn hensel_multi(f: &Zx, factors: &[Zp], p: u64, bound: &BigInt) -> (Vec<Zx>, BigInt) {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut modulus = BigInt::from(p);
    for (k, g) in factors.iter().enumerate() {
        if k + 1 == factors.len() {
            let lc = rest.last().unwrap().clone();
            let inv = lc.modinv(&modulus).expect("leading coefficient invertible");
            out.push(symmetric(&rest.iter().map(|c| c * &inv).collect(), &modulus));
            break;
        }
        let h = factors[k + 1..].iter().fold(vec![1u64], |a, b| mul_p(&a, b, p));
        let (gz, hz, m) = hensel_two(&rest, g, &h, p, bound);
        out.push(gz);
        rest = hz;
        modulus = m;
    }
    (out, modulus)
}

fn coefficient_bound(f: &Zx) -> BigInt {
    let n = f.len() - 1;
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    // Mignotte: any factor has coefficients at most 2^n |f|_2; the candidate also carries lc(f)
    let b = (BigInt::one() << n) * norm * f.last().unwrap().abs();
    2 * b + 1
}

/// Irreducible factors over `Z` of a square-free primitive polynomial of positive degree with
/// positive leading coefficient. Each factor is primitive with positive leading coefficient.
pub fn factor_squarefree_z(f: &Zx) -> Vec<Zx> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: Option<(u64, Vec<Zp>)> = None;
    let mut good = 0;
    for &p in PRIMES {
        let fp = to_p(f, p);
        if fp.len() != f.len() {
            continue;
        }
        let fm = monic_p(&fp, p);
        if gcd_p(&fm, &derivative_p(&fm, p), p).len() > 1 {
            continue;
        }
        let fs = factor_mod_p(&fm, p, &mut rng);
        if fs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        good += 1;
        if good == CANDIDATE_PRIMES {
            break;
        }
    }
    let (p, modular) = best.expect("a prime not dividing the discriminant");
    let bound = coefficient_bound(f);
    let (mut lifted, modulus) = hensel_multi(f, &modular, p, &bound);
    let mut f = f.clone();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), s) {
            let lc = f.last().unwrap().clone();
            let cand = subset.iter().fold(vec![lc.clone()], |a, &i| symmetric(&mul_z(&a, &lifted[i]), &modulus));
            let g = primitive(&cand);
            if let Some(q) = exact_div_z(&f, &g) {
                out.push(g);
                f = q;
                let keep: Vec<Zx> =
                    lifted.iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, v)| v.clone()).collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if f.len() > 1 {
        out.push(primitive(&f));
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Zx {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn sorted(mut v: Vec<Zx>) -> Vec<Zx> {
        v.sort_by_key(|f| (f.len(), f.clone()));
        v
    }

    #[test]
    fn degree_nine_norm() {
        let f = z(&[47616, 148224, 229632, 214528, 134784, 59616, 18576, 3888, 486, 27]);
        let fs = sorted(factor_squarefree_z(&f));
        assert_eq!(fs, vec![z(&[24, 12, 6, 1]), z(&[1984, 5184, 6480, 4320, 1620, 324, 27])]);
    }

    #[test]
    fn swinnerton_dyer_and_cyclotomic() {
        // x^4 - 10x^2 + 1 splits into quadratics or linears modulo every prime
        assert_eq!(factor_squarefree_z(&z(&[1, 0, -10, 0, 1])), vec![z(&[1, 0, -10, 0, 1])]);
        let f = z(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let fs = sorted(factor_squarefree_z(&f));
        assert_eq!(fs.len(), 6);
        assert_eq!(fs.iter().fold(z(&[1]), |a, b| mul_z(&a, b)), f);
    }

    #[test]
    fn non_monic() {
        let f = mul_z(&z(&[3, 0, 5]), &mul_z(&z(&[-1, 2]), &z(&[7, 1, 0, 4])));
        let fs = sorted(factor_squarefree_z(&f));
        assert_eq!(fs, vec![z(&[-1, 2]), z(&[3, 0, 5]), z(&[7, 1, 0, 4])]);
    }
}
