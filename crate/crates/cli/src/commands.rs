//! The `bound` and `simulate` pipelines.

use std::path::{Path, PathBuf};

use thiserror::Error;

use nilentropy_core::entropy_sim::{compare_cover, equality_report, SimParams};
use nilentropy_core::intpoly::DEFAULT_ROOT_TOL;
use nilentropy_core::nilcore::{induced_blocks, lower_central_series, spectral_consistency};
use nilentropy_core::spectral::entropy_lower_bound_with_tol;
use nilentropy_core::{AffineTorusMap, CoverSpec, NilError, SimError, SpectralError};

use crate::input::{algebra_from_document, int_matrix, parse_document, InputDocument, ParseError};
use crate::report::{
    CoverRecord, EqualityRecord, LinearizationRecord, Parameters, ReportDocument, SimulationRecord,
};

/// Agreement expected between estimate and bound for affine maps.
pub const EQUALITY_TOLERANCE: f64 = 0.15;
/// Agreement expected between a map and its lift.
pub const COVER_TOLERANCE: f64 = 0.1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("`{command}` does not accept documents of kind `{kind}`")]
    WrongKind {
        command: &'static str,
        kind: &'static str,
    },
    #[error("`simulate --cover` needs a `cover` lattice in the document")]
    MissingCover,
    #[error("algebra: {0}")]
    Nil(#[from] NilError),
    #[error("spectral: {0}")]
    Spectral(#[from] SpectralError),
    #[error("simulation: {0}")]
    Sim(#[from] SimError),
}

pub fn read_document(path: &Path) -> Result<InputDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_document(&text)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundOptions {
    pub tol: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            tol: DEFAULT_ROOT_TOL,
        }
    }
}

pub fn cmd_bound(doc: &InputDocument, opts: &BoundOptions) -> Result<ReportDocument, CliError> {
    let params = Parameters {
        tol: opts.tol,
        n_max: None,
        epsilons: None,
        delta_fraction: None,
        cover: None,
    };
    match doc {
        InputDocument::Matrix { rows } => {
            let a = int_matrix(rows);
            let bound = entropy_lower_bound_with_tol(&a, opts.tol)?;
            Ok(ReportDocument::new(
                "bound",
                params,
                doc.clone(),
                &a,
                &bound,
            ))
        }
        InputDocument::AlgebraEndo {
            dimension,
            brackets,
            endomorphism,
        } => {
            let (alg, endo) = algebra_from_document(*dimension, brackets, endomorphism);
            let series = lower_central_series(&alg)?;
            let blocks = induced_blocks(&alg, &endo)?;
            let consistent = spectral_consistency(&alg, &endo, &blocks);
            let bound = entropy_lower_bound_with_tol(&blocks.direct_sum, opts.tol)?;
            let mut report =
                ReportDocument::new("bound", params, doc.clone(), &blocks.direct_sum, &bound);
            report.linearization = Some(LinearizationRecord::new(
                series.degrees(),
                series.adapted_basis(),
                &blocks.blocks,
                consistent,
            ));
            Ok(report)
        }
        InputDocument::TorusMap { .. } => Err(CliError::WrongKind {
            command: "bound",
            kind: doc.kind(),
        }),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulateOptions {
    pub params: SimParams,
    pub cover: bool,
    pub tol: f64,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        SimulateOptions {
            params: SimParams::default(),
            cover: false,
            tol: DEFAULT_ROOT_TOL,
        }
    }
}

pub fn cmd_simulate(
    doc: &InputDocument,
    opts: &SimulateOptions,
) -> Result<ReportDocument, CliError> {
    let InputDocument::TorusMap {
        rows,
        translation,
        cover,
    } = doc
    else {
        return Err(CliError::WrongKind {
            command: "simulate",
            kind: doc.kind(),
        });
    };
    let a = int_matrix(rows);
    let b = translation.clone().unwrap_or_else(|| vec![0.0; rows.len()]);
    let map = AffineTorusMap::new(a.clone(), b)?;
    let cover_spec = match (opts.cover, cover) {
        (false, _) => None,
        (true, Some(l)) => Some(CoverSpec::new(int_matrix(l))?),
        (true, None) => return Err(CliError::MissingCover),
    };

    let eq = equality_report(&map, &opts.params)?;
    let bound = entropy_lower_bound_with_tol(&a, opts.tol)?;
    let cover_record = match &cover_spec {
        Some(spec) => {
            let c = compare_cover(&map, spec, &opts.params)?;
            Some(CoverRecord::new(
                spec.lattice(),
                spec.degree(),
                &c,
                COVER_TOLERANCE,
            ))
        }
        None => None,
    };
    let params = Parameters {
        tol: opts.tol,
        n_max: Some(opts.params.n_max),
        epsilons: Some(opts.params.epsilons.clone()),
        delta_fraction: Some(opts.params.delta_fraction),
        cover: Some(opts.cover),
    };
    let mut report = ReportDocument::new("simulate", params, doc.clone(), &a, &bound);
    report.simulation = Some(SimulationRecord {
        estimate: (&eq.estimate).into(),
        equality: EqualityRecord::new(&eq, EQUALITY_TOLERANCE),
        cover: cover_record,
    });
    Ok(report)
}
