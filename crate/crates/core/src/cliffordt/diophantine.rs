//! Solving `t t* = ξ` over Z[ω] for doubly positive `ξ ∈ Z[√2]`.
//!
//! Factors the integer norm of `ξ`, splits each prime into Z[ω] primes via
//! Euclidean gcds, and fixes the leftover unit at the end. Candidates whose
//! norm resists factoring within the rho budget are reported as unsolved.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ring::{from_big, ZOmega, ZRoot2};

type BR = ZRoot2<BigInt>;
type BW = ZOmega<BigInt>;

/// Montgomery arithmetic modulo an odd `m < 2^127`.
#[derive(Debug, Clone, Copy)]
struct Mont {
    m: u128,
    neg_inv: u128,
    r2: u128,
}

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a1, a0) = (a >> 64, a & u64::MAX as u128);
    let (b1, b0) = (b >> 64, b & u64::MAX as u128);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & u64::MAX as u128) + (p10 & u64::MAX as u128);
    let lo = (p00 & u64::MAX as u128) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

impl Mont {
    fn new(m: u128) -> Self {
        debug_assert!(m % 2 == 1 && m < (1 << 127));
        let mut inv = m;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(inv)));
        }
        let mut r = (u128::MAX % m + 1) % m;
        for _ in 0..128 {
            r = add_mod(r, r, m);
        }
        Mont { m, neg_inv: inv.wrapping_neg(), r2: r }
    }

    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let q = lo.wrapping_mul(self.neg_inv);
        let (qh, ql) = mul_wide(q, self.m);
        let (_, carry) = lo.overflowing_add(ql);
        let t = hi + qh + carry as u128;
        if t >= self.m {
            t - self.m
        } else {
            t
        }
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.m, self.r2)
    }

    fn from_mont(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    fn pow(&self, base: u128, mut e: u128) -> u128 {
        let mut acc = self.to_mont(1);
        let mut b = self.to_mont(base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        self.from_mont(acc)
    }
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

const SMALL_PRIMES: [u128; 18] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61];

pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mont = Mont::new(n);
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = mont.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mont.from_mont(mont.mul(mont.to_mont(x), mont.to_mont(x)));
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `None` when the budget runs out.
fn rho(n: u128, budget: u64) -> Option<u128> {
    let mont = Mont::new(n);
    let mut spent = 0u64;
    for c in 1..=8u128 {
        let cm = mont.to_mont(c);
        let f = |x: u128| add_mod(mont.mul(x, x), cm, n);
        let mut y = mont.to_mont(2);
        let mut r = 1u64;
        let mut q = mont.to_mont(1);
        let (mut x, mut ys);
        let mut g;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                let steps = 128.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mont.mul(q, x.abs_diff(y));
                }
                g = gcd_u128(mont.from_mont(q), n);
                k += steps;
                spent += steps;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 || spent > budget {
                break;
            }
        }
        if g == n {
            // Backtrack one step at a time.
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != 1 && g != n {
            return Some(g);
        }
        if spent > budget {
            return None;
        }
    }
    None
}

/// Default Pollard rho iteration budget per factorization.
pub const RHO_BUDGET: u64 = 1 << 17;

/// Prime factorization with multiplicities, sorted by prime.
pub fn factor(n: u128, budget: u64) -> Option<Vec<(u128, u32)>> {
    let mut primes: Vec<u128> = Vec::new();
    let mut rest = n;
    let mut p = 2u128;
    while p < 1000 && p * p <= rest {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        if let Some(r) = exact_sqrt(m) {
            stack.push(r);
            stack.push(r);
            continue;
        }
        let d = rho(m, budget)?;
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u128, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    Some(out)
}

fn exact_sqrt(m: u128) -> Option<u128> {
    let mut r = (m as f64).sqrt() as u128;
    while r * r > m {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= m {
        r += 1;
    }
    (r * r == m).then_some(r)
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod(a: u128, p: u128) -> Option<u128> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    let mont = Mont::new(p);
    if mont.pow(a, (p - 1) / 2) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while mont.pow(z, (p - 1) / 2) != p - 1 {
        z += 1;
    }
    let mm = |x: u128, y: u128| mont.from_mont(mont.mul(mont.to_mont(x), mont.to_mont(y)));
    let mut m = s;
    let mut c = mont.pow(z, q);
    let mut t = mont.pow(a, q);
    let mut r = mont.pow(a, q.div_ceil(2));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mm(tt, tt);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mm(b, b);
        }
        m = i;
        c = mm(b, b);
        t = mm(t, c);
        r = mm(r, b);
    }
    Some(r)
}

fn big(x: u128) -> BigInt {
    BigInt::from(x)
}

/// Nearest integer to `num / den`.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
    let two_den: BigInt = &den * 2;
    let shifted: BigInt = num * 2 + den;
    shifted.div_floor(&two_den)
}

fn gcd_root2(a: &BR, b: &BR) -> BR {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let n = b.norm();
        let num = a.clone() * b.bullet();
        let q = ZRoot2::new(div_round(&num.a, &n), div_round(&num.b, &n));
        let r = a - q * b.clone();
        a = b;
        b = r;
    }
    a
}

fn gcd_omega(a: &BW, b: &BW) -> BW {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let nb = b.norm();
        let ns = b.norm_sqr();
        let num = a.clone() * b.conj() * ZOmega::from_root2(&ns.bullet());
        let coords = num.coords();
        let rounded = coords.clone().map(|c| div_round(&c, &nb));
        let mut r = a.clone() - ZOmega::from_coords(rounded) * b.clone();
        if r.norm() >= nb {
            // Coordinate rounding can tie; try the neighbouring lattice points.
            let floors = coords.clone().map(|c| c.div_floor(&nb));
            for mask in 0..16u32 {
                let q: [BigInt; 4] = std::array::from_fn(|i| &floors[i] + BigInt::from((mask >> i) & 1));
                let cand = a.clone() - ZOmega::from_coords(q) * b.clone();
                if cand.norm() < r.norm() {
                    r = cand;
                }
            }
        }
        a = b;
        b = r;
    }
    a
}

/// Z[ω] prime above the rational prime `p` (`p ≡ 3, 5 mod 8`) or above the
/// Z[√2] prime `eta` (`p ≡ 1 mod 8`).
fn omega_prime(p: u128, eta: &BR) -> Option<BW> {
    let e = ZOmega::from_root2(eta);
    let g = match p % 8 {
        1 | 5 => {
            let h = sqrt_mod(p - 1, p)?;
            gcd_omega(&e, &ZOmega::new(big(h), BigInt::zero(), BigInt::one(), BigInt::zero()))
        }
        3 => {
            let h = sqrt_mod(p - 2, p)?;
            gcd_omega(&e, &ZOmega::new(big(h), BigInt::one(), BigInt::zero(), BigInt::one()))
        }
        _ => return None,
    };
    Some(g)
}

fn divide_out(rest: &mut BR, d: &BR) -> u32 {
    let mut e = 0;
    while let Some(q) = rest.div_exact(d) {
        *rest = q;
        e += 1;
    }
    e
}

/// Finds `t` with `t t* = xi`, or `None` if there is no solution or the
/// norm could not be factored within `budget`.
pub fn solve_norm_equation(xi: &ZRoot2<i128>, budget: u64) -> Option<ZOmega<i128>> {
    if xi.is_zero() {
        return Some(ZOmega::zero());
    }
    if !xi.is_doubly_nonneg() {
        return None;
    }
    let n = xi.norm();
    let factors = factor(u128::try_from(n).ok()?, budget)?;
    let xi_big = ZRoot2::new(BigInt::from(xi.a), BigInt::from(xi.b));
    let mut rest = xi_big.clone();
    let mut t: BW = ZOmega::one();
    for (p, _) in factors {
        match p % 8 {
            0 | 2 | 4 | 6 => {
                let e = rest.sqrt2_valuation();
                for _ in 0..e {
                    rest = rest.div_sqrt2();
                }
                let delta = ZOmega::new(BigInt::one(), BigInt::one(), BigInt::zero(), BigInt::zero());
                t = t * delta.pow(e);
            }
            3 | 5 => {
                let e = divide_out(&mut rest, &ZRoot2::from_int(big(p)));
                if e > 0 {
                    t = t * omega_prime(p, &ZRoot2::from_int(big(p)))?.pow(e);
                }
            }
            _ => {
                let x = sqrt_mod(2, p)?;
                let eta = gcd_root2(&ZRoot2::from_int(big(p)), &ZRoot2::new(big(x), BigInt::one()));
                for prime in [eta.clone(), eta.bullet()] {
                    let e = divide_out(&mut rest, &prime);
                    if e == 0 {
                        continue;
                    }
                    if p % 8 == 7 {
                        if e % 2 == 1 {
                            return None;
                        }
                        t = t * ZOmega::from_root2(&prime).pow(e / 2);
                    } else {
                        t = t * omega_prime(p, &prime)?.pow(e);
                    }
                }
            }
        }
    }
    if rest.norm().abs() != BigInt::one() {
        return None;
    }
    // xi = (t t*) λ^{2j}; absorb λ^j into t.
    let mut unit = xi_big.div_exact(&t.norm_sqr())?;
    let lam2: BR = ZRoot2::lambda().pow(2);
    let lam2_inv: BR = ZRoot2::lambda_inv().pow(2);
    let mut j = 0i32;
    while unit != ZRoot2::one() {
        if j.abs() > 400 {
            return None;
        }
        if unit.a.is_positive() && unit.b.is_positive() {
            unit = unit * lam2_inv.clone();
            j += 1;
        } else {
            unit = unit * lam2.clone();
            j -= 1;
        }
    }
    let fix: BR = if j >= 0 { ZRoot2::lambda().pow(j as u32) } else { ZRoot2::lambda_inv().pow((-j) as u32) };
    t = t * ZOmega::from_root2(&fix);
    if t.norm_sqr() != xi_big {
        return None;
    }
    from_big(&t)
}
