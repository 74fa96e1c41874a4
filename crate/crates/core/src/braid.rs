//! Braid words in `B_N` and their extraction from band trajectories.
//!
//! Strands are labelled by the real-part rank of the bands at the base
//! point. A letter `τ_n^{±1}` records that the strands currently at ranks
//! `n` and `n + 1` (1-based) exchange their real-part order; the exponent is
//! `+1` when the strand coming from below passes with the larger imaginary
//! part on the upper strand, i.e. `Im(E_upper − E_lower) > 0` at the
//! crossing. With this convention the exponent sum of an extracted word
//! equals the spectral winding index.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matching::assign;
use crate::spectrum::BandTrajectory;
use crate::{tolerance, Error};

/// Bijection of `{0, …, N−1}`; `image(i)` is where strand `i` ends up.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    /// 0-based images; fails unless they form a bijection.
    pub fn from_images(image: Vec<usize>) -> Result<Self, Error> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!("{image:?} is not a permutation")));
            }
        }
        Ok(Self { image })
    }

    /// Exchange of positions `i` and `i + 1` (0-based).
    pub fn transposition(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.image.swap(i, i + 1);
        p
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Permutation {
            image: self.image.iter().map(|&i| next.image[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// Which strand sits at each position afterwards: the list read as
    /// `(E1, E2, E3) → (E_a, E_b, E_c)`.
    pub fn arrangement(&self) -> Vec<usize> {
        self.inverse().image
    }

    /// e.g. `(E2,E3,E1)`.
    pub fn arrangement_label(&self) -> String {
        let parts: Vec<String> = self.arrangement().iter().map(|s| format!("E{}", s + 1)).collect();
        format!("({})", parts.join(","))
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.image.len()];
        let mut out = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut i = self.image[start];
            while i != start {
                seen[i] = true;
                cycle.push(i);
                i = self.image[i];
            }
            out.push(cycle);
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    /// 1-based images, as serialized.
    fn try_from(one_based: Vec<usize>) -> Result<Self, Error> {
        if one_based.contains(&0) {
            return Err(Error::InvalidArgument("permutation images are 1-based".into()));
        }
        Self::from_images(one_based.into_iter().map(|i| i - 1).collect())
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.image.into_iter().map(|i| i + 1).collect()
    }
}

/// Cycle notation with 1-based labels; `id` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        for c in cycles {
            let labels: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", labels.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// `τ_n` or `τ_n^{−1}`, with `n` 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn pos(generator: usize) -> Self {
        Self {
            generator,
            sign: Sign::Positive,
        }
    }

    pub fn neg(generator: usize) -> Self {
        Self {
            generator,
            sign: Sign::Negative,
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            sign: self.sign.flipped(),
            ..self
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.sign != other.sign
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Positive => write!(f, "t{}", self.generator),
            Sign::Negative => write!(f, "T{}", self.generator),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn identity(strands: usize) -> Self {
        Self {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self, Error> {
        if strands == 0 {
            return Err(Error::InvalidWord("need at least one strand".into()));
        }
        if let Some(bad) = letters.iter().find(|l| l.generator == 0 || l.generator >= strands) {
            return Err(Error::InvalidWord(format!(
                "generator {} out of range for {strands} strands",
                bad.generator
            )));
        }
        Ok(Self { strands, letters })
    }

    /// Parses the compact text form, e.g. `"t1 t2 T1"` or `"e"`.
    pub fn parse(text: &str, strands: usize) -> Result<Self, Error> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Self::new(strands, Vec::new());
        }
        let letters = text
            .split_whitespace()
            .map(|tok| {
                let (head, digits) = tok.split_at(1);
                let generator: usize = digits
                    .parse()
                    .map_err(|_| Error::InvalidWord(format!("bad letter `{tok}`")))?;
                match head {
                    "t" => Ok(Letter::pos(generator)),
                    "T" => Ok(Letter::neg(generator)),
                    _ => Err(Error::InvalidWord(format!("bad letter `{tok}`"))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product of the adjacent transpositions in word order; signs ignored.
    pub fn induced_permutation(&self) -> Permutation {
        let mut at_position: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            at_position.swap(l.generator - 1, l.generator);
        }
        Permutation {
            image: Permutation { image: at_position }.inverse().image,
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, Error> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch(self.strands, other.strands));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Removes adjacent `τ_n τ_n^{−1}` pairs until none remain. The braid
    /// relations themselves are not applied.
    pub fn free_reduce(&self) -> BraidWord {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        BraidWord {
            strands: self.strands,
            letters: stack,
        }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign.value()).sum()
    }

    /// Free reduction followed by cancelling inverse pairs across the ends.
    pub fn cyclic_reduce(&self) -> BraidWord {
        let mut letters = self.free_reduce().letters;
        while letters.len() >= 2 && letters[0].cancels(letters[letters.len() - 1]) {
            letters.pop();
            letters.remove(0);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    pub fn rotated(&self, by: usize) -> BraidWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let by = by % letters.len();
            letters.rotate_left(by);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// Lexicographically smallest rotation of the cyclically reduced word.
    pub fn canonical_rotation(&self) -> BraidWord {
        let reduced = self.cyclic_reduce();
        (0..reduced.len().max(1))
            .map(|r| reduced.rotated(r))
            .min_by(|a, b| a.letters.cmp(&b.letters))
            .unwrap_or(reduced)
    }

    /// Equal after cyclic reduction, up to rotation.
    pub fn cyclically_equivalent(&self, other: &BraidWord) -> bool {
        self.strands == other.strands && self.canonical_rotation() == other.canonical_rotation()
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.letters.iter().map(Letter::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

struct Crossing {
    at: f64,
    lower: usize,
    upper: usize,
    sign: Sign,
}

/// Locates where bands `a` and `b` exchange real-part order inside
/// `[lo, hi]` and reads the crossing sign there.
fn locate_crossing(
    t: &BandTrajectory,
    (mut lo, mut e_lo): (f64, Vec<Complex64>),
    hi: f64,
    lower: usize,
    upper: usize,
) -> Result<Crossing, Error> {
    let mut hi = hi;
    let below = |e: &[Complex64]| e[lower].re < e[upper].re;
    let follow = |anchor: &[Complex64], at: f64| -> Result<Vec<Complex64>, Error> {
        let raw = t.evaluate(at)?;
        let a = assign(anchor, &raw);
        Ok(a.into_iter().map(|i| raw[i]).collect())
    };
    while hi - lo > tolerance::CROSSING_WIDTH {
        let mid = 0.5 * (lo + hi);
        let e_mid = follow(&e_lo, mid)?;
        if below(&e_mid) {
            lo = mid;
            e_lo = e_mid;
        } else {
            hi = mid;
        }
    }
    let at = 0.5 * (lo + hi);
    let e = follow(&e_lo, at)?;
    let diff = e[upper] - e[lower];
    let scale = 1.0 + e.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if diff.norm() < tolerance::DEGENERACY * scale {
        return Err(Error::DegenerateCrossing {
            at,
            lower: lower + 1,
            upper: upper + 1,
        });
    }
    let sign = if diff.im > 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    };
    Ok(Crossing {
        at,
        lower,
        upper,
        sign,
    })
}

/// Reads the braid word of a trajectory from its real-part crossings, in
/// order of increasing `k`.
pub fn extract_braid_word(t: &BandTrajectory) -> Result<BraidWord, Error> {
    let n = t.band_count();
    // rank[b] = current real-part rank of band b; bands start sorted.
    let mut rank: Vec<usize> = (0..n).collect();
    let mut letters = Vec::new();

    for j in 0..t.samples() {
        let next = t.energies_at_index(j + 1);
        let mut events = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if rank[a] < rank[b] && next[a].re > next[b].re {
                    events.push(locate_crossing(
                        t,
                        (t.grid[j], t.energies_at_index(j)),
                        t.grid[j + 1],
                        a,
                        b,
                    )?);
                }
            }
        }
        events.sort_by(|x, y| x.at.total_cmp(&y.at));
        for pair in events.windows(2) {
            let shares_strand = [pair[0].lower, pair[0].upper]
                .iter()
                .any(|s| *s == pair[1].lower || *s == pair[1].upper);
            if shares_strand && pair[1].at - pair[0].at < tolerance::CROSSING_WIDTH {
                return Err(Error::UnresolvedCrossing { at: pair[0].at });
            }
        }
        for ev in events {
            let (rl, ru) = (rank[ev.lower], rank[ev.upper]);
            if ru != rl + 1 {
                return Err(Error::UnresolvedCrossing { at: ev.at });
            }
            letters.push(Letter {
                generator: rl + 1,
                sign: ev.sign,
            });
            rank.swap(ev.lower, ev.upper);
        }
    }

    let word = BraidWord::new(n, letters)?;
    if rank != t.closure.images() {
        return Err(Error::UnresolvedCrossing {
            at: *t.grid.last().unwrap(),
        });
    }
    Ok(word)
}
