//! Exact synthesis of 2x2 unitaries over D[ω] into Clifford+T words.
//!
//! Each `H T^j` step lowers the smallest denominator exponent (sde) of
//! `|u00|^2` by one; once it is small, a precomputed table of minimal-T words
//! finishes the job up to a global phase `ω^p`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::ring::{ZOmega, ZRoot2};
use crate::statesim::Mat2c;

type W = ZOmega<i128>;

/// Single-qubit Clifford+T letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    H,
    S,
    Sdg,
    T,
    Tdg,
    X,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 7] = [Letter::H, Letter::S, Letter::Sdg, Letter::T, Letter::Tdg, Letter::X, Letter::Z];

    pub fn is_t(self) -> bool {
        matches!(self, Letter::T | Letter::Tdg)
    }

    /// Entrywise complex conjugate.
    pub fn conj(self) -> Letter {
        match self {
            Letter::S => Letter::Sdg,
            Letter::Sdg => Letter::S,
            Letter::T => Letter::Tdg,
            Letter::Tdg => Letter::T,
            other => other,
        }
    }

    pub fn matrix(self) -> Mat2c {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let w = |k: f64| Complex64::from_polar(1.0, k * std::f64::consts::FRAC_PI_4);
        match self {
            Letter::H => [[h, h], [h, -h]],
            Letter::S => [[o, z], [z, w(2.0)]],
            Letter::Sdg => [[o, z], [z, w(-2.0)]],
            Letter::T => [[o, z], [z, w(1.0)]],
            Letter::Tdg => [[o, z], [z, w(-1.0)]],
            Letter::X => [[z, o], [o, z]],
            Letter::Z => [[o, z], [z, -o]],
        }
    }

    fn exact(self) -> ExactU2 {
        let d = |k: i32| ExactU2::new([W::one(), W::zero(), W::zero(), W::one().mul_omega(k)], 0);
        match self {
            Letter::H => ExactU2::new([W::one(), W::one(), W::one(), -W::one()], 1),
            Letter::S => d(2),
            Letter::Sdg => d(6),
            Letter::T => d(1),
            Letter::Tdg => d(7),
            Letter::X => ExactU2::new([W::zero(), W::one(), W::one(), W::zero()], 0),
            Letter::Z => d(4),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Letter::H => "H",
            Letter::S => "S",
            Letter::Sdg => "SDG",
            Letter::T => "T",
            Letter::Tdg => "TDG",
            Letter::X => "X",
            Letter::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Letters for `T^j` (time order).
pub fn t_power(j: i32) -> Vec<Letter> {
    match j.rem_euclid(8) {
        0 => vec![],
        1 => vec![Letter::T],
        2 => vec![Letter::S],
        3 => vec![Letter::S, Letter::T],
        4 => vec![Letter::Z],
        5 => vec![Letter::Z, Letter::T],
        6 => vec![Letter::Sdg],
        _ => vec![Letter::Tdg],
    }
}

/// Product of letters given in time order (first letter acts first).
pub fn word_matrix(letters: &[Letter]) -> Mat2c {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut m = [[one, zero], [zero, one]];
    for l in letters {
        m = crate::gatedecomp::mul2(&l.matrix(), &m);
    }
    m
}

/// `m / √2^k`, row-major, kept with the smallest possible `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactU2 {
    pub m: [W; 4],
    pub k: u32,
}

impl ExactU2 {
    pub fn new(m: [W; 4], k: u32) -> Self {
        let mut u = ExactU2 { m, k };
        u.reduce();
        u
    }

    pub fn identity() -> Self {
        ExactU2::new([W::one(), W::zero(), W::zero(), W::one()], 0)
    }

    fn reduce(&mut self) {
        while self.k > 0 && self.m.iter().all(|e| e.divisible_by_sqrt2()) {
            for e in self.m.iter_mut() {
                *e = e.div_sqrt2();
            }
            self.k -= 1;
        }
    }

    /// Matrix product `self * o`.
    pub fn mul(&self, o: &ExactU2) -> ExactU2 {
        let a = &self.m;
        let b = &o.m;
        let e = |i: usize, j: usize| a[2 * i].clone() * b[j].clone() + a[2 * i + 1].clone() * b[2 + j].clone();
        ExactU2::new([e(0, 0), e(0, 1), e(1, 0), e(1, 1)], self.k + o.k)
    }

    pub fn mul_omega(&self, p: i32) -> ExactU2 {
        ExactU2 { m: self.m.clone().map(|e| e.mul_omega(p)), k: self.k }
    }

    /// sde of `|u00|^2`.
    pub fn sde(&self) -> u32 {
        let n: ZRoot2<i128> = self.m[0].norm_sqr();
        if n.is_zero() {
            return 0;
        }
        (2 * self.k).saturating_sub(n.sqrt2_valuation())
    }

    pub fn to_matrix(&self) -> Mat2c {
        let s = (2f64).powf(-(self.k as f64) / 2.0);
        let c = |e: &W| e.to_complex() * s;
        [[c(&self.m[0]), c(&self.m[1])], [c(&self.m[2]), c(&self.m[3])]]
    }

    /// Representative of the class `{ω^p self}`.
    fn phase_key(&self) -> (u32, [i128; 16]) {
        (0..8)
            .map(|p| {
                let u = self.mul_omega(p);
                let mut key = [0i128; 16];
                for (i, e) in u.m.iter().enumerate() {
                    key[4 * i..4 * i + 4].copy_from_slice(&[e.a, e.b, e.c, e.d]);
                }
                (u.k, key)
            })
            .min()
            .expect("eight phases")
    }
}

/// Largest sde stored in the lookup table.
const TABLE_SDE: u32 = 4;
/// Exploration bound used while building the table.
const EXPLORE_SDE: u32 = TABLE_SDE + 3;

struct Entry {
    letters: Vec<Letter>,
    matrix: ExactU2,
}

fn table() -> &'static HashMap<(u32, [i128; 16]), Entry> {
    static TABLE: OnceLock<HashMap<(u32, [i128; 16]), Entry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Dijkstra on (T-count, length); ties resolved by discovery order.
        let mut best: HashMap<(u32, [i128; 16]), Entry> = HashMap::new();
        let mut heap = BinaryHeap::new();
        let mut pending: Vec<(Vec<Letter>, ExactU2)> = vec![(Vec::new(), ExactU2::identity())];
        heap.push(Reverse((0usize, 0usize, 0usize)));
        while let Some(Reverse((tc, len, id))) = heap.pop() {
            let (letters, mat) = pending[id].clone();
            let key = mat.phase_key();
            if best.contains_key(&key) {
                continue;
            }
            for l in Letter::ALL {
                let next = l.exact().mul(&mat);
                if next.sde() > EXPLORE_SDE || best.contains_key(&next.phase_key()) {
                    continue;
                }
                let mut w = letters.clone();
                w.push(l);
                pending.push((w, next));
                heap.push(Reverse((tc + l.is_t() as usize, len + 1, pending.len() - 1)));
            }
            best.insert(key, Entry { letters, matrix: mat });
        }
        best.retain(|_, e| e.matrix.sde() <= TABLE_SDE);
        best
    })
}

/// Word (time order) and phase `p` with `word = ω^p · u`.
pub fn exact_synthesize(u: &ExactU2) -> Option<(Vec<Letter>, i32)> {
    let mut cur = u.clone();
    // Suffix pieces in reverse time order.
    let mut tail: Vec<Letter> = Vec::new();
    while cur.sde() > TABLE_SDE {
        let s = cur.sde();
        let mut stepped = None;
        for j in [0, 2, 1, 3] {
            let next = Letter::H.exact().mul(&t_exact(j).mul(&cur));
            if next.sde() < s {
                stepped = Some((j, next));
                break;
            }
        }
        let (j, next) = stepped?;
        // cur = T^{-j} H next
        let mut piece = vec![Letter::H];
        piece.extend(t_power(-j));
        tail.splice(0..0, piece);
        cur = next;
    }
    let entry = table().get(&cur.phase_key())?;
    let p = (0..8).find(|&p| cur.mul_omega(p) == entry.matrix)?;
    let mut word = entry.letters.clone();
    word.extend(tail);
    Some((word, p))
}

fn t_exact(j: i32) -> ExactU2 {
    ExactU2::new([W::one(), W::zero(), W::zero(), W::one().mul_omega(j)], 0)
}
