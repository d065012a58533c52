//! Univariate polynomials over [`Rational`] and exact sign certification.
//!
//! The central question downstream is: given a gap polynomial `g(t)`, is
//! `g >= 0` for every `t` in `(0, s]`? The answer here is never numeric.
//! A positive answer is a [`SignProof`] — vanishing order, Sturm root
//! count, isolating cells and positive gap samples — that
//! [`verify_sign_proof`] rechecks from scratch. A negative answer is an
//! exact rational `t` with `g(t) < 0`.
//!
//! Root counting uses the Sturm chain with the zero-skipping variation
//! convention, under which `V(a) - V(b)` counts distinct roots in the
//! half-open interval `(a, b]` whenever the polynomial is square-free and
//! nonzero at `a`. That convention lets bisection proceed without ever
//! deflating a root that lands on a cell boundary.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Coefficients in ascending order of degree; no trailing zeros.
/// The zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(i.into()))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Quotient and remainder; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dlead = divisor.coeffs.last().unwrap();
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(ddeg)];
        while rem.len() > ddeg {
            let lead = rem.last().unwrap();
            if lead.is_zero() {
                rem.pop();
                continue;
            }
            let factor = lead / dlead;
            let shift = rem.len() - 1 - ddeg;
            // The leading term cancels exactly; subtract only the rest.
            for i in 0..ddeg {
                let delta = &factor * &divisor.coeffs[i];
                rem[shift + i] -= delta;
            }
            quot[shift] = factor;
            rem.pop();
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.coeffs.last() {
            Some(lead) if !lead.is_one() => {
                let inv = lead.recip();
                a.scale(&inv)
            }
            _ => a,
        }
    }

    /// Square-free part `self / gcd(self, self')`: same roots, all simple.
    pub fn square_free(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Index and value of the lowest-degree nonzero coefficient.
    pub fn lowest_nonzero(&self) -> Option<(usize, &Rational)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    /// Divide by `t^m`; the first `m` coefficients must be zero.
    pub fn shift_down(&self, m: usize) -> Poly {
        assert!(self.coeffs.iter().take(m).all(|c| c.is_zero()));
        Poly::from_coeffs(self.coeffs.iter().skip(m).cloned().collect())
    }
}

/// Sturm chain of a square-free polynomial.
pub struct SturmChain {
    seq: Vec<Poly>,
}

impl SturmChain {
    pub fn of(p: &Poly) -> SturmChain {
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let last = &seq[seq.len() - 1];
            if last.is_zero() {
                seq.pop();
                break;
            }
            let r = seq[seq.len() - 2].rem(last).neg();
            seq.push(r);
        }
        SturmChain { seq }
    }

    /// Sign variations at `t`, skipping zero values.
    pub fn variations_at(&self, t: &Rational) -> usize {
        let mut count = 0;
        let mut prev: Option<bool> = None;
        for p in &self.seq {
            let v = p.eval(t);
            if v.is_zero() {
                continue;
            }
            let pos = v > Rational::zero();
            if let Some(prev_pos) = prev {
                if prev_pos != pos {
                    count += 1;
                }
            }
            prev = Some(pos);
        }
        count
    }

    /// Distinct roots in `(a, b]`; requires the chain's polynomial to be
    /// square-free and nonzero at `a`.
    pub fn count_roots_half_open(&self, a: &Rational, b: &Rational) -> usize {
        debug_assert!(!self.seq[0].eval(a).is_zero());
        self.variations_at(a) - self.variations_at(b)
    }
}

/// Checkable record of the claim "`poly >= 0` on `(0, bound]`" (or `> 0`
/// when `strict`). See [`verify_sign_proof`] for exactly what it promises.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignProof {
    pub bound: Rational,
    pub strict: bool,
    /// Vanishing order at 0 and the first nonzero coefficient; both zero
    /// for the zero polynomial.
    pub vanishing_order: usize,
    pub lowest_coeff: Rational,
    /// Isolating cells `(l, u]`, ascending, one distinct root each.
    pub root_cells: Vec<(Rational, Rational)>,
    /// `(t, value)` with `value = poly(t) > 0`: one sample strictly between
    /// consecutive roots, plus one after the last root unless the last root
    /// is `bound` itself.
    pub gap_samples: Vec<(Rational, Rational)>,
}

#[derive(Debug, Clone)]
pub enum SignOutcome {
    Certified(SignProof),
    /// `poly(t) < 0` with `0 < t <= bound`.
    Negative {
        t: Rational,
        value: Rational,
    },
    /// Strict queries only: the polynomial vanishes somewhere in the cell.
    Vanishes {
        cell: (Rational, Rational),
    },
}

/// Decide `g >= 0` on `(0, bound]` with a proof or an exact countersample.
pub fn nonneg_on(g: &Poly, bound: &Rational) -> SignOutcome {
    decide_sign(g, bound, false)
}

/// Decide `g > 0` on `(0, bound]`.
pub fn positive_on(g: &Poly, bound: &Rational) -> SignOutcome {
    decide_sign(g, bound, true)
}

fn decide_sign(g: &Poly, bound: &Rational, strict: bool) -> SignOutcome {
    assert!(bound > &Rational::zero());
    if g.is_zero() {
        return if strict {
            SignOutcome::Vanishes { cell: (Rational::zero(), bound.clone()) }
        } else {
            SignOutcome::Certified(SignProof {
                bound: bound.clone(),
                strict: false,
                vanishing_order: 0,
                lowest_coeff: Rational::zero(),
                root_cells: Vec::new(),
                gap_samples: Vec::new(),
            })
        };
    }

    let (m, c_m) = g.lowest_nonzero().expect("nonzero polynomial");
    if c_m < &Rational::zero() {
        // Negative immediately to the right of 0: halve down from `bound`
        // until the sample lands below the first root.
        let mut t = bound.clone();
        loop {
            let v = g.eval(&t);
            if v < Rational::zero() {
                return SignOutcome::Negative { t, value: v };
            }
            t /= Rational::from_integer(2.into());
        }
    }

    let h = g.shift_down(m).square_free();
    let chain = SturmChain::of(&h);
    let zero = Rational::zero();
    let total = chain.count_roots_half_open(&zero, bound);

    if strict && total > 0 {
        let cells = isolate_roots(&h, &chain, &zero, bound, total);
        return SignOutcome::Vanishes { cell: cells[0].clone() };
    }

    let cells = isolate_roots(&h, &chain, &zero, bound, total);
    let mut samples = Vec::new();
    for i in 0..cells.len() {
        let after = &cells[i].1;
        let next_edge = if i + 1 < cells.len() { &cells[i + 1].0 } else { bound };
        let t = if h.eval(after).is_zero() {
            // The root sits exactly on the cell's upper edge; sample between
            // the cells (no root lives there). For the final cell this only
            // happens when the root is `bound` itself: no segment remains.
            if after == next_edge || (i + 1 == cells.len() && after == bound) {
                continue;
            }
            (after + next_edge) / Rational::from_integer(2.into())
        } else {
            after.clone()
        };
        let v = g.eval(&t);
        if v < Rational::zero() {
            return SignOutcome::Negative { t, value: v };
        }
        debug_assert!(!v.is_zero(), "gap samples never land on roots");
        samples.push((t, v));
    }

    SignOutcome::Certified(SignProof {
        bound: bound.clone(),
        strict,
        vanishing_order: m,
        lowest_coeff: c_m.clone(),
        root_cells: cells,
        gap_samples: samples,
    })
}

/// Bisection into isolating cells `(l, u]`, each holding exactly one root
/// of square-free `h`, with `h` nonzero at every cell's lower edge.
fn isolate_roots(
    h: &Poly,
    chain: &SturmChain,
    a: &Rational,
    b: &Rational,
    count: usize,
) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), b.clone(), count)];
    while let Some((lo, hi, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                // Split at the midpoint, nudging toward `lo` while the
                // candidate is itself a root (at most deg(h) nudges ever).
                let mut mid = (&lo + &hi) / Rational::from_integer(2.into());
                while h.eval(&mid).is_zero() {
                    mid = (&lo + &mid) / Rational::from_integer(2.into());
                }
                let left = chain.count_roots_half_open(&lo, &mid);
                stack.push((mid.clone(), hi, n - left));
                stack.push((lo, mid, left));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Recheck a [`SignProof`] from scratch against `g`. Confirms the vanishing
/// order and lowest coefficient, recounts roots over `(0, bound]` and in
/// every cell by Sturm's theorem, checks cell ordering, and checks that the
/// samples are positioned between consecutive roots (and after the last),
/// evaluate to the recorded values, and are strictly positive. A strict
/// proof additionally requires no roots at all.
pub fn verify_sign_proof(g: &Poly, proof: &SignProof) -> Result<()> {
    let fail = |msg: &str| Err(Error::Internal(format!("sign proof rejected: {msg}")));
    if proof.bound <= Rational::zero() {
        return fail("bound not positive");
    }
    if g.is_zero() {
        if proof.strict {
            return fail("zero polynomial is not strictly positive");
        }
        if !proof.root_cells.is_empty() || !proof.gap_samples.is_empty() {
            return fail("zero polynomial proof must be trivial");
        }
        return Ok(());
    }
    let (m, c_m) = g.lowest_nonzero().expect("nonzero polynomial");
    if m != proof.vanishing_order || c_m != &proof.lowest_coeff {
        return fail("vanishing order or lowest coefficient mismatch");
    }
    if c_m <= &Rational::zero() {
        return fail("lowest nonzero coefficient not positive");
    }

    let h = g.shift_down(m).square_free();
    let chain = SturmChain::of(&h);
    let zero = Rational::zero();
    let total = chain.count_roots_half_open(&zero, &proof.bound);
    if total != proof.root_cells.len() {
        return fail("root count differs from cell count");
    }
    if proof.strict && total != 0 {
        return fail("strict proof with roots present");
    }

    let mut prev_hi: Option<&Rational> = None;
    for (l, u) in &proof.root_cells {
        if l < &zero || u > &proof.bound || l >= u {
            return fail("cell out of range");
        }
        if let Some(p) = prev_hi {
            if l < p {
                return fail("cells overlap");
            }
        }
        if h.eval(l).is_zero() {
            return fail("cell lower edge is a root");
        }
        if chain.count_roots_half_open(l, u) != 1 {
            return fail("cell does not isolate exactly one root");
        }
        prev_hi = Some(u);
    }

    // Which gaps require a sample: after every cell, except past the last
    // one when its root is `bound` itself.
    let mut expected = Vec::new();
    for i in 0..proof.root_cells.len() {
        let lo = &proof.root_cells[i].1;
        let hi = if i + 1 < proof.root_cells.len() {
            &proof.root_cells[i + 1].0
        } else if g.eval(&proof.bound).is_zero() {
            continue;
        } else {
            &proof.bound
        };
        expected.push((lo, hi));
    }
    if proof.gap_samples.len() != expected.len() {
        return fail("wrong number of gap samples");
    }
    for ((t, v), (lo, hi)) in proof.gap_samples.iter().zip(&expected) {
        if t < lo || t > hi {
            return fail("gap sample outside its gap");
        }
        if h.eval(t).is_zero() {
            return fail("gap sample is a root");
        }
        if &g.eval(t) != v || v <= &Rational::zero() {
            return fail("gap sample value wrong or not positive");
        }
    }
    Ok(())
}
