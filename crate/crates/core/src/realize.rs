//! Split graphs whose factor graph is an `n`-simple transitive triangle,
//! built from a Δ-triple of `n`.
//!
//! The clique is laid out as seven consecutive blocks, one per Venn cell of
//! the three neighborhoods, in the order a-only, ab, ac, abc, b-only, bc,
//! c-only.

use serde::Serialize;

use crate::delta::DeltaTriple;
use crate::error::{Error, Result};
use crate::graphs::{graph_stats, is_n_simple_type0_triangle, SplitGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RealizationParams {
    pub n: u64,
    pub triple: [u64; 3],
    pub d_a: u64,
    pub d_b: u64,
    pub d_c: u64,
    pub eta_ab: u64,
    pub eta_bc: u64,
    pub eta_ac: u64,
    pub eta_abc: u64,
    pub k_size: u64,
}

/// Venn-cell sizes in layout order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VennCells {
    pub a_only: u64,
    pub ab: u64,
    pub ac: u64,
    pub abc: u64,
    pub b_only: u64,
    pub bc: u64,
    pub c_only: u64,
}

impl VennCells {
    pub fn as_array(&self) -> [u64; 7] {
        [self.a_only, self.ab, self.ac, self.abc, self.b_only, self.bc, self.c_only]
    }
}

/// Parameters for the realization with `d_a = dA`, taking `eta_abc` at its
/// floor `max(0, dA - x - z)`.
pub fn realization_params(triple: &DeltaTriple, d_a: u64) -> Result<RealizationParams> {
    let (n, x, y, z) = (triple.n(), triple.x(), triple.y(), triple.z());
    if d_a < z {
        return Err(Error::Invalid(format!("dA = {d_a} is below z = {z}")));
    }
    let huge = || Error::Overflow("realization parameters");
    let (nx, nz) = (n / x - x, n / z - z);
    let d_b = d_a.checked_add(nz).ok_or_else(huge)?;
    let d_c = d_a.checked_add(nx).ok_or_else(huge)?;
    let eta_ab = d_a - z;
    let eta_bc = d_b - y;
    let eta_ac = d_a - x;
    let eta_abc = d_a.saturating_sub(x + z);
    let k_size = (n / x + z + y).checked_add(eta_abc).ok_or_else(huge)?;
    let params = RealizationParams {
        n,
        triple: triple.as_array(),
        d_a,
        d_b,
        d_c,
        eta_ab,
        eta_bc,
        eta_ac,
        eta_abc,
        k_size,
    };
    let cells = params.cells()?;
    if cells.as_array().iter().sum::<u64>() != k_size {
        return Err(Error::Falsified(format!(
            "cells of {} with dA = {d_a} do not fill the clique",
            triple
        )));
    }
    Ok(params)
}

impl RealizationParams {
    /// The seven cell sizes; errors if any would be negative.
    pub fn cells(&self) -> Result<VennCells> {
        let (da, db, dc) = (self.d_a as i128, self.d_b as i128, self.d_c as i128);
        let (ab, bc, ac, abc) = (
            self.eta_ab as i128,
            self.eta_bc as i128,
            self.eta_ac as i128,
            self.eta_abc as i128,
        );
        let raw = [
            da - ab - ac + abc,
            ab - abc,
            ac - abc,
            abc,
            db - ab - bc + abc,
            bc - abc,
            dc - ac - bc + abc,
        ];
        if let Some(neg) = raw.iter().position(|&c| c < 0) {
            return Err(Error::Invalid(format!(
                "infeasible layout: cell {neg} has size {}",
                raw[neg]
            )));
        }
        let c = raw.map(|v| v as u64);
        Ok(VennCells {
            a_only: c[0],
            ab: c[1],
            ac: c[2],
            abc: c[3],
            b_only: c[4],
            bc: c[5],
            c_only: c[6],
        })
    }
}

/// Builds the graph and checks it: degrees, all three multiplicities equal
/// to `n`, transitive orientation, balanced.
pub fn realize_graph(params: &RealizationParams) -> Result<SplitGraph> {
    let cells = params.cells()?.as_array();
    let mut blocks = Vec::with_capacity(7);
    let mut next = 1usize;
    for size in cells {
        let size = usize::try_from(size).map_err(|_| Error::Overflow("clique size"))?;
        blocks.push(next..next + size);
        next += size;
    }
    let pick = |ids: &[usize]| -> Vec<usize> { ids.iter().flat_map(|&i| blocks[i].clone()).collect() };
    // indices into the layout: 0 a, 1 ab, 2 ac, 3 abc, 4 b, 5 bc, 6 c
    let s = SplitGraph::new(
        params.k_size as usize,
        vec![pick(&[0, 1, 2, 3]), pick(&[1, 3, 4, 5]), pick(&[2, 3, 5, 6])],
    )?;

    let fail = |what: &str| {
        Err(Error::Falsified(format!(
            "realization of {:?} for {} with dA = {}: {what}",
            params.triple, params.n, params.d_a
        )))
    };
    if s.i_degrees() != [params.d_a, params.d_b, params.d_c] {
        return fail("degrees differ from the parameters");
    }
    if !is_n_simple_type0_triangle(&s, params.n) {
        return fail("factor graph is not an n-simple transitive triangle");
    }
    if !graph_stats(&s).balanced {
        return fail("graph is not balanced");
    }
    Ok(s)
}

/// Realizations with `dA` in `[z, x + z]` in which every vertex is active.
/// Each kept graph is checked to be indecomposable.
pub fn active_realizations(triple: &DeltaTriple) -> Result<Vec<(u64, SplitGraph)>> {
    let mut out = Vec::new();
    for d_a in triple.z()..=triple.x() + triple.z() {
        let s = realize_graph(&realization_params(triple, d_a)?)?;
        let stats = graph_stats(&s);
        if stats.all_active() {
            if !stats.indecomposable_active {
                return Err(Error::Falsified(format!(
                    "active realization of {triple} with dA = {d_a} has a disconnected factor graph"
                )));
            }
            out.push((d_a, s));
        }
    }
    if out.is_empty() {
        return Err(Error::Falsified(format!("{triple} has no active realization")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::{delta_triples, divisor_diff_sets};
    use crate::graphs::{factor_graph, triangle_type, TriangleType};

    fn t(n: u64, x: u64, y: u64, z: u64) -> DeltaTriple {
        DeltaTriple::new(n, x, y, z).unwrap()
    }

    #[test]
    fn params_examples() {
        let p = realization_params(&t(24, 2, 3, 3), 3).unwrap();
        assert_eq!(
            (p.d_b, p.d_c, p.eta_ab, p.eta_bc, p.eta_ac, p.eta_abc, p.k_size),
            (8, 13, 0, 5, 1, 0, 18)
        );
        let p = realization_params(&t(40, 4, 5, 5), 5).unwrap();
        assert_eq!((p.eta_ab, p.k_size), (0, 20));
        assert!(realization_params(&t(24, 2, 3, 3), 2).is_err());
    }

    #[test]
    fn fig3_layout() {
        let p = realization_params(&t(24, 2, 3, 3), 3).unwrap();
        assert_eq!(p.cells().unwrap().as_array(), [2, 0, 1, 0, 3, 5, 7]);
        let s = realize_graph(&p).unwrap();
        assert_eq!(s.neighborhood(0), vec![1, 2, 3]);
        assert_eq!(s.neighborhood(1), (4..=11).collect::<Vec<_>>());
        assert_eq!(s.neighborhood(2), [3].into_iter().chain(7..=18).collect::<Vec<_>>());
    }

    #[test]
    fn minimal_da_is_active_and_indecomposable() {
        for tr in [t(24, 2, 3, 3), t(40, 4, 5, 5), t(385, 5, 7, 11)] {
            let s = realize_graph(&realization_params(&tr, tr.z()).unwrap()).unwrap();
            assert!(graph_stats(&s).indecomposable_active);
        }
    }

    #[test]
    fn active_examples() {
        let got = active_realizations(&t(24, 2, 3, 3)).unwrap();
        assert_eq!(got.iter().map(|(d, _)| *d).collect::<Vec<_>>(), vec![3, 4, 5]);
        assert!(!active_realizations(&t(40, 4, 5, 5)).unwrap().is_empty());
        for (_, s) in active_realizations(&t(385, 5, 7, 11)).unwrap() {
            assert!(is_n_simple_type0_triangle(&s, 385));
        }
    }

    #[test]
    fn beyond_x_plus_z_has_universal_vertex() {
        for tr in [t(24, 2, 3, 3), t(180, 2, 3, 5), t(385, 7, 11, 11)] {
            let d_a = tr.x() + tr.z() + 1;
            let s = realize_graph(&realization_params(&tr, d_a).unwrap()).unwrap();
            assert!(!graph_stats(&s).all_active());
        }
    }

    #[test]
    fn round_trip_small() {
        for n in 2..=600 {
            for tr in delta_triples(n).unwrap() {
                let (x, y, z) = (tr.x(), tr.y(), tr.z());
                for d_a in [z, z + 1, x + z] {
                    let p = realization_params(&tr, d_a).unwrap();
                    let s = realize_graph(&p).unwrap();
                    let phi = factor_graph(&s);
                    for (u, v) in [(0, 1), (1, 2), (0, 2)] {
                        assert_eq!(s.sigma_oracle(u, v).unwrap(), n);
                        assert_eq!(phi.multiplicity(u, v), n);
                    }
                    // d_a - eta_ab = z, d_b - eta_ab = n/z, and so on
                    assert_eq!((p.d_a - p.eta_ab, p.d_b - p.eta_ab), (z, n / z));
                    assert_eq!((p.d_b - p.eta_bc, p.d_c - p.eta_bc), (y, n / y));
                    assert_eq!((p.d_a - p.eta_ac, p.d_c - p.eta_ac), (x, n / x));
                    assert_eq!(triangle_type(&s, [0, 1, 2]).unwrap(), TriangleType::Delta0);
                    let sets = divisor_diff_sets(n).unwrap();
                    assert!(sets.intersection().contains(&(p.d_c - p.d_a)));
                }
            }
        }
    }

    #[test]
    fn infinitely_many_realizations() {
        let tr = t(24, 2, 3, 3);
        for d_a in 3..=53 {
            let s = realize_graph(&realization_params(&tr, d_a).unwrap()).unwrap();
            assert!(graph_stats(&s).balanced);
        }
    }
}
