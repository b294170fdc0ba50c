//! Assembly of the chemical master equation generator and its windows.
//!
//! The exact generator `A` has diagonal `-a0(x_j)` and, for each reaction
//! `r`, a band at offset `d_r` holding `a_r(x_j)` in column `j`. The frozen
//! variant evaluates every propensity at a fixed anchor state, which makes
//! each band constant along its length (Toeplitz). Flows whose target index
//! leaves `[1, Q]` are dropped, so boundary columns leak probability; caps
//! are expected to be generous enough that this mass is negligible.

use std::io::Write;

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::reaction_system::{ReactionSystem, State, StateIndex};

/// Default cap on the number of states for which full generator bands are
/// materialized in memory.
pub const DEFAULT_GENERATOR_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorKind {
    Exact,
    Frozen { anchor: State },
}

/// A CME generator (or a principal sub-matrix of one) in banded storage.
#[derive(Clone, Debug)]
pub struct CmeGenerator {
    matrix: BandedMatrix,
    kind: GeneratorKind,
}

impl CmeGenerator {
    pub fn matrix(&self) -> &BandedMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// A contiguous range of state indices, both ends inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    lo: StateIndex,
    hi: StateIndex,
}

impl Window {
    pub fn new(lo: StateIndex, hi: StateIndex) -> Result<Self> {
        if lo.get() < 1 || hi.get() < lo.get() {
            return Err(Error::Config(format!(
                "invalid window [{}, {}]",
                lo.get(),
                hi.get()
            )));
        }
        Ok(Window { lo, hi })
    }

    pub fn full(q: u64) -> Self {
        Window {
            lo: StateIndex::new(1),
            hi: StateIndex::new(q),
        }
    }

    pub fn lo(&self) -> StateIndex {
        self.lo
    }

    pub fn hi(&self) -> StateIndex {
        self.hi
    }

    pub fn width(&self) -> u64 {
        self.hi.get() - self.lo.get() + 1
    }

    pub fn contains(&self, idx: StateIndex) -> bool {
        idx.get() >= self.lo.get() && idx.get() <= self.hi.get()
    }

    /// Position of a covered index inside the window.
    pub fn local(&self, idx: StateIndex) -> Result<usize> {
        if !self.contains(idx) {
            return Err(Error::WindowDoesNotCover {
                lo: self.lo.get(),
                hi: self.hi.get(),
                index: idx.get(),
            });
        }
        Ok((idx.get() - self.lo.get()) as usize)
    }
}

/// Assembles the exact generator over the whole state space.
pub fn build_exact_generator(sys: &ReactionSystem, budget: u64) -> Result<CmeGenerator> {
    let q = sys.state_count();
    if q > budget {
        return Err(Error::GeneratorBudget { q, budget });
    }
    Ok(build_exact_window(sys, &Window::full(q))?)
}

/// Assembles the principal sub-matrix of the exact generator on `window`
/// without materializing the full operator.
pub fn build_exact_window(sys: &ReactionSystem, window: &Window) -> Result<CmeGenerator> {
    let q = sys.state_count();
    if window.hi().get() > q {
        return Err(Error::IndexOutOfRange {
            index: window.hi().get(),
            q,
        });
    }
    let w = window.width() as usize;
    let mut matrix = BandedMatrix::new(w);
    for local_j in 0..w {
        let global_j = window.lo().get() + local_j as u64;
        let x_j = sys.state_from_index(StateIndex::new(global_j))?;
        let mut a0 = 0.0;
        for r in 0..sys.num_reactions() {
            let a_r = sys.propensity(r, &x_j);
            a0 += a_r;
            let d = sys.index_shift(r);
            let target = global_j as i64 + d;
            if target >= window.lo().get() as i64 && target <= window.hi().get() as i64 {
                matrix.add(d, local_j, a_r);
            }
        }
        matrix.add(0, local_j, -a0);
    }
    Ok(CmeGenerator {
        matrix,
        kind: GeneratorKind::Exact,
    })
}

/// Assembles the frozen generator with every propensity evaluated at `xbar`.
pub fn build_frozen_generator(
    sys: &ReactionSystem,
    xbar: &[u32],
    budget: u64,
) -> Result<CmeGenerator> {
    let q = sys.state_count();
    if q > budget {
        return Err(Error::GeneratorBudget { q, budget });
    }
    build_frozen_window(sys, xbar, &Window::full(q))
}

/// Frozen generator restricted to `window`; bands are constant along their
/// full length.
pub fn build_frozen_window(
    sys: &ReactionSystem,
    xbar: &[u32],
    window: &Window,
) -> Result<CmeGenerator> {
    if !sys.within_caps(xbar) {
        return Err(Error::OutOfCaps {
            state: xbar.to_vec(),
            caps: sys.caps().to_vec(),
        });
    }
    let q = sys.state_count();
    if window.hi().get() > q {
        return Err(Error::IndexOutOfRange {
            index: window.hi().get(),
            q,
        });
    }
    let w = window.width() as usize;
    let mut matrix = BandedMatrix::new(w);
    let rates: Vec<f64> = (0..sys.num_reactions())
        .map(|r| sys.propensity(r, xbar))
        .collect();
    let a0: f64 = rates.iter().sum();
    for local_j in 0..w {
        for (r, &a_r) in rates.iter().enumerate() {
            matrix.add(sys.index_shift(r), local_j, a_r);
        }
        matrix.add(0, local_j, -a0);
    }
    Ok(CmeGenerator {
        matrix,
        kind: GeneratorKind::Frozen {
            anchor: xbar.to_vec(),
        },
    })
}

/// Per-species window size estimate: the mean propensity at `x0` times the
/// step length, rounded, floored at 4.
pub fn submatrix_size_estimate(sys: &ReactionSystem, x0: &[u32], tau: f64) -> u64 {
    let mean: f64 = sys.total_propensity(x0) / sys.num_reactions() as f64;
    let s = (mean * tau).round() as i64;
    s.max(4) as u64
}

/// Builds a contiguous window of width at least `width` that covers every
/// anchor, centered on the anchors' midpoint and shifted to stay in `[1, q]`.
pub fn make_window(anchors: &[StateIndex], width: u64, q: u64) -> Window {
    assert!(!anchors.is_empty(), "make_window needs at least one anchor");
    let min = anchors.iter().map(|a| a.get()).min().unwrap();
    let max = anchors.iter().map(|a| a.get()).max().unwrap();
    let span = max - min + 1;
    let w = width.max(span).min(q);
    let center = (min + max) / 2;
    let mut lo = center.saturating_sub((w - 1) / 2).max(1);
    let mut hi = lo + w - 1;
    if hi > q {
        hi = q;
        lo = hi + 1 - w;
    }
    Window {
        lo: StateIndex::new(lo),
        hi: StateIndex::new(hi),
    }
}

/// Principal sub-matrix of `g` on `window` (indices relative to `g` itself).
pub fn extract_window(g: &CmeGenerator, window: &Window) -> Result<CmeGenerator> {
    let dim = g.matrix.dim() as u64;
    if window.hi().get() > dim {
        return Err(Error::IndexOutOfRange {
            index: window.hi().get(),
            q: dim,
        });
    }
    let w = window.width() as usize;
    let lo = window.lo().offset();
    let mut matrix = BandedMatrix::new(w);
    for band in g.matrix.bands() {
        let d = band.offset;
        for local_j in 0..w {
            let j = lo + local_j;
            let row = j as i64 + d;
            if row >= lo as i64 && row < (lo + w) as i64 {
                let v = band.values[j];
                if v != 0.0 {
                    matrix.add(d, local_j, v);
                }
            }
        }
    }
    Ok(CmeGenerator {
        matrix,
        kind: g.kind.clone(),
    })
}

/// Writes the generator as one `row col value` triplet per line, one-based.
pub fn write_coordinate_dump<W: Write>(g: &CmeGenerator, out: &mut W) -> std::io::Result<()> {
    let dim = g.matrix.dim();
    for j in 0..dim {
        for band in g.matrix.bands() {
            let row = j as i64 + band.offset;
            if row >= 0 && row < dim as i64 && band.values[j] != 0.0 {
                writeln!(out, "{} {} {}", row + 1, j + 1, band.values[j])?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems;
    use approx::assert_relative_eq;

    #[test]
    fn birth_generator_is_lower_bidiagonal() {
        // One birth reaction with constant propensity on caps [2]: 3x3 with
        // diagonal (-a, -a, -a) and subdiagonal (a, a).
        let sys = systems::pure_birth(2, 1.5);
        let g = build_exact_generator(&sys, DEFAULT_GENERATOR_BUDGET).unwrap();
        let d = g.matrix().to_dense();
        let a = 1.5;
        let expected = nalgebra::dmatrix![
            -a, 0.0, 0.0;
             a,  -a, 0.0;
            0.0,  a,  -a
        ];
        assert_eq!(d, expected);
    }

    #[test]
    fn zero_propensities_give_zero_matrix() {
        let sys = systems::inert(4);
        let g = build_exact_generator(&sys, DEFAULT_GENERATOR_BUDGET).unwrap();
        assert_eq!(g.matrix().to_dense(), nalgebra::DMatrix::zeros(5, 5));
        let f = build_frozen_generator(&sys, &[2], DEFAULT_GENERATOR_BUDGET).unwrap();
        assert_eq!(f.matrix().to_dense(), nalgebra::DMatrix::zeros(5, 5));
    }

    #[test]
    fn schlogl_generator_shape() {
        let sys = systems::schlogl();
        let g = build_exact_generator(&sys, DEFAULT_GENERATOR_BUDGET).unwrap();
        assert_eq!(g.dim(), 901);
        let offsets: Vec<i64> = g.matrix().bands().iter().map(|b| b.offset).collect();
        assert_eq!(offsets, vec![-1, 0, 1]);
    }

    #[test]
    fn frozen_schlogl_bands_are_constant() {
        let sys = systems::schlogl();
        let g = build_frozen_generator(&sys, &[250], DEFAULT_GENERATOR_BUDGET).unwrap();
        let a1 = 933.75;
        let a2 = 257.3;
        let a3 = 200.0;
        let a4 = 875.0;
        let m = g.matrix();
        // Band +1 carries a1 + a3, band -1 carries a2 + a4.
        assert_relative_eq!(m.entry(1, 0), a1 + a3, max_relative = 1e-12);
        assert_relative_eq!(m.entry(500, 499), a1 + a3, max_relative = 1e-12);
        assert_relative_eq!(m.entry(499, 500), a2 + a4, max_relative = 1e-12);
        assert_relative_eq!(m.entry(0, 0), -(a1 + a2 + a3 + a4), max_relative = 1e-12);
        for band in m.bands() {
            let d = band.offset;
            let lo = (-d).max(0) as usize;
            let hi = (m.dim() as i64 - 1 - d.max(0)) as usize;
            let first = band.values[lo];
            for j in lo..=hi {
                assert_eq!(band.values[j], first);
            }
        }
    }

    #[test]
    fn frozen_equals_exact_for_constant_propensities() {
        let sys = systems::pure_birth(30, 0.7);
        let exact = build_exact_generator(&sys, DEFAULT_GENERATOR_BUDGET).unwrap();
        let frozen = build_frozen_generator(&sys, &[11], DEFAULT_GENERATOR_BUDGET).unwrap();
        assert_eq!(exact.matrix(), frozen.matrix());
    }

    #[test]
    fn interior_columns_sum_to_zero() {
        let sys = systems::schlogl();
        let g = build_exact_generator(&sys, DEFAULT_GENERATOR_BUDGET).unwrap();
        for j in 1..900 {
            assert_eq!(g.matrix().column_sum(j), 0.0);
        }
        let iso = systems::isomer(20, 3.0, 5.0);
        let gi = build_exact_generator(&iso, DEFAULT_GENERATOR_BUDGET).unwrap();
        let q = iso.state_count() as usize;
        for j in 0..q {
            let reachable_targets_inside = (0..iso.num_reactions()).all(|r| {
                let t = j as i64 + 1 + iso.index_shift(r);
                t >= 1 && t <= q as i64
            });
            if reachable_targets_inside {
                assert!(gi.matrix().column_sum(j).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sign_pattern_holds_everywhere() {
        let sys = systems::isomer(15, 2.0, 4.0);
        let g = build_exact_generator(&sys, DEFAULT_GENERATOR_BUDGET).unwrap();
        for band in g.matrix().bands() {
            for (j, &v) in band.values.iter().enumerate() {
                if band.offset == 0 {
                    assert!(v <= 0.0, "diagonal entry {} at column {}", v, j);
                } else {
                    assert!(v >= 0.0);
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let sys = systems::lotka();
        assert!(matches!(
            build_exact_generator(&sys, 1000),
            Err(Error::GeneratorBudget { .. })
        ));
    }

    #[test]
    fn size_estimate_matches_reference_values() {
        let iso = systems::isomer(80, 10.0, 10.0);
        assert_eq!(submatrix_size_estimate(&iso, &[40, 40], 0.05), 20);

        let lotka = systems::lotka();
        assert_eq!(submatrix_size_estimate(&lotka, &[1000, 1000], 0.01), 125);

        let schlogl = systems::schlogl();
        let s = submatrix_size_estimate(&schlogl, &[250], 0.4);
        assert!((222..=232).contains(&s), "estimate {} outside 227 +/- 5", s);

        let inert = systems::inert(10);
        assert_eq!(submatrix_size_estimate(&inert, &[0], 1.0), 4);
    }

    #[test]
    fn make_window_examples() {
        let w = make_window(&[StateIndex::new(251)], 5, 901);
        assert_eq!((w.lo().get(), w.hi().get()), (249, 253));

        let w = make_window(&[StateIndex::new(3), StateIndex::new(5)], 9, 901);
        assert_eq!((w.lo().get(), w.hi().get()), (1, 9));

        let w = make_window(&[StateIndex::new(100), StateIndex::new(400)], 250, 901);
        assert_eq!(w.width(), 301);
        assert!(w.contains(StateIndex::new(100)) && w.contains(StateIndex::new(400)));

        // Upper boundary shift.
        let w = make_window(&[StateIndex::new(899)], 10, 901);
        assert_eq!(w.hi().get(), 901);
        assert_eq!(w.width(), 10);
    }

    #[test]
    fn extract_full_window_is_identity() {
        let sys = systems::isomer(10, 1.0, 2.0);
        let g = build_exact_generator(&sys, DEFAULT_GENERATOR_BUDGET).unwrap();
        let w = Window::full(sys.state_count());
        let e = extract_window(&g, &w).unwrap();
        assert_eq!(g.matrix(), e.matrix());
    }

    #[test]
    fn single_state_window_is_diagonal_entry() {
        let sys = systems::schlogl();
        let g = build_exact_generator(&sys, DEFAULT_GENERATOR_BUDGET).unwrap();
        let w = Window::new(StateIndex::new(251), StateIndex::new(251)).unwrap();
        let e = extract_window(&g, &w).unwrap();
        assert_eq!(e.dim(), 1);
        let a0 = sys.total_propensity(&[250]);
        assert_relative_eq!(e.matrix().entry(0, 0), -a0, max_relative = 1e-12);
    }

    #[test]
    fn direct_window_assembly_matches_extraction() {
        let sys = systems::isomer(12, 2.0, 3.0);
        let g = build_exact_generator(&sys, DEFAULT_GENERATOR_BUDGET).unwrap();
        let w = Window::new(StateIndex::new(40), StateIndex::new(90)).unwrap();
        let direct = build_exact_window(&sys, &w).unwrap();
        let extracted = extract_window(&g, &w).unwrap();
        assert_eq!(direct.matrix().to_dense(), extracted.matrix().to_dense());
    }

    #[test]
    fn coordinate_dump_round_trips() {
        let sys = systems::pure_birth(2, 1.5);
        let g = build_exact_generator(&sys, DEFAULT_GENERATOR_BUDGET).unwrap();
        let mut buf = Vec::new();
        write_coordinate_dump(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut entries: Vec<(usize, usize, f64)> = text
            .lines()
            .map(|line| {
                let mut it = line.split_whitespace();
                (
                    it.next().unwrap().parse().unwrap(),
                    it.next().unwrap().parse().unwrap(),
                    it.next().unwrap().parse().unwrap(),
                )
            })
            .collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        assert_eq!(
            entries,
            vec![
                (1, 1, -1.5),
                (2, 1, 1.5),
                (2, 2, -1.5),
                (3, 2, 1.5),
                (3, 3, -1.5),
            ]
        );
    }
}
