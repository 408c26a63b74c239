//! Glue between the oracles and the crate under test.

use super::*;
use elastica::mesh::{CurvatureField, CurveState, Grid};
use elastica::scheme::{assemble_terms, SchemeParams, Terms};

pub fn lemniscate_monitor(xi: &[f64]) -> f64 {
    1.0 + (xi[0] - 1.0).powi(2) / 10.0
}

pub fn unit_monitor(_: &[f64]) -> f64 {
    1.0
}

pub fn crate_terms(t: Term) -> Terms {
    match t {
        Term::Mass => Terms::MASS,
        Term::Bending => Terms::BENDING,
        Term::Transport => Terms::TRANSPORT,
        Term::Penalty => Terms::PENALTY,
        Term::Monitor => Terms::MONITOR,
        Term::CurvatureMass => Terms::CURVATURE_MASS,
        Term::CurvatureCoupling => Terms::CURVATURE_COUPLING,
    }
}

pub fn flat(v: &[Vec<f64>]) -> Vec<f64> {
    v.iter().flatten().copied().collect()
}

/// Worst relative mismatch over all terms in isolation and all terms together.
pub fn compare(
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    grid: &Grid<f64>,
    params: &SchemeParams<f64>,
    oracle: OracleScheme,
) -> f64 {
    let dim = x[0].len();
    let xs = CurveState::new(dim, 0.0, flat(x)).unwrap();
    let ys = CurvatureField::new(dim, flat(y)).unwrap();
    let mut worst = 0.0f64;
    let mut selections: Vec<Vec<Term>> = ALL_TERMS.iter().map(|&t| vec![t]).collect();
    selections.push(ALL_TERMS.to_vec());
    for selection in selections {
        let terms = selection.iter().fold(Terms::NONE, |acc, &t| acc | crate_terms(t));
        let sys = assemble_terms(&xs, &ys, params, grid, terms).unwrap();
        let reference = quadrature_system(x, y, grid.nodes(), params.delta, oracle, &selection);
        let dense = sys.matrix.to_dense();
        let scale = max_abs(&reference.matrix);
        if scale > 0.0 {
            worst = worst.max(relative_diff(&dense, &reference.matrix));
        } else {
            assert_eq!(max_abs(&dense), 0.0, "{selection:?} should be empty");
        }
        if max_abs(&reference.rhs) > 0.0 {
            worst = worst.max(relative_diff(&sys.rhs, &reference.rhs));
        } else {
            assert_eq!(max_abs(&sys.rhs), 0.0);
        }
    }
    worst
}

