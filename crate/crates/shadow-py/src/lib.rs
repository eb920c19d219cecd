//! Python bindings for the shadow calculus: a thin wrapper around the
//! text format plus the main pipelines (validation, boundary homology,
//! normalization, doubling, classification).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use shadow_core::boundary::{boundary_h1, is_candidate_shadow, CandidateResult};
use shadow_core::cw::{homology, Coefficients};
use shadow_core::graph::DecoratedGraph;
use shadow_core::moves::{double_with_bubbles, fuzz_block};
use shadow_core::normalize::normalize;
use shadow_core::plumbing::{plumbing_det, plumbing_pattern_witness};
use shadow_core::presentations::{ac_classify, classify_s, AcResult, Family};
use shadow_core::textio::{emit_dot, emit_json, emit_text, parse, parse_presentation_spec, PresentationInput};

/// A decorated graph describing a vertex-free shadowed polyhedron.
#[pyclass]
struct Shadow {
    g: DecoratedGraph,
}

#[pymethods]
impl Shadow {
    /// Parses the text form (`vertex`/`edge` statements).
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let g = parse(text).map_err(|e| PyValueError::new_err(format!("{e}")))?;
        Ok(Shadow { g })
    }

    fn to_text(&self) -> String {
        emit_text(&self.g)
    }

    fn to_dot(&self) -> String {
        emit_dot(&self.g)
    }

    /// Runs the well-formedness checks (slot arities, decoration parity).
    fn validate(&self) -> PyResult<()> {
        self.g.validate().map_err(|e| PyValueError::new_err(format!("{e}")))
    }

    fn euler(&self) -> i64 {
        self.g.euler_char()
    }

    fn is_closed(&self) -> bool {
        self.g.is_closed()
    }

    /// First homology of the boundary 3-manifold, as a string like
    /// `Z^2 + Z/3`.
    fn boundary_h1(&self) -> PyResult<String> {
        self.check_valid()?;
        Ok(format!("{}", boundary_h1(&self.g)))
    }

    /// `h` when the graph is a candidate shadow of a closed 4-manifold
    /// (boundary H1 free of rank h), otherwise `None`.
    fn candidate_rank(&self) -> PyResult<Option<usize>> {
        self.check_valid()?;
        Ok(match is_candidate_shadow(&self.g) {
            CandidateResult::Yes { h } => Some(h),
            CandidateResult::No { .. } => None,
        })
    }

    /// Homology of the polyhedron in degrees 0..=2 with integer (`"z"`)
    /// or mod-2 (`"z2"`) coefficients.
    fn homology(&self, deg: usize, coeff: &str) -> PyResult<String> {
        self.check_valid()?;
        let c = match coeff {
            "z" => Coefficients::Integers,
            "z2" => Coefficients::Mod2,
            _ => return Err(PyValueError::new_err("coeff must be `z` or `z2`")),
        };
        if deg > 2 {
            return Err(PyValueError::new_err("degree must be 0, 1, or 2"));
        }
        Ok(format!("{}", homology(&self.g, c)[deg]))
    }

    /// Runs the normalizer and returns the decomposition as a JSON
    /// string.
    fn normalize_json(&self) -> PyResult<String> {
        self.check_valid()?;
        let d = normalize(&self.g).map_err(|e| PyValueError::new_err(format!("{e}")))?;
        Ok(emit_json(&d))
    }

    /// Shadow of the double: decorations zeroed, one bubble per region.
    fn double(&self) -> PyResult<Shadow> {
        self.check_valid()?;
        let d = double_with_bubbles(&self.g).map_err(|e| PyValueError::new_err(format!("{e}")))?;
        Ok(Shadow { g: d })
    }

    /// Classification of a gleam-free graph with finite fundamental
    /// group, e.g. `"C(4) + 1 S^2"` or `"infinite"`.
    fn classify_ac(&self) -> PyResult<String> {
        match ac_classify(&self.g).map_err(|e| PyValueError::new_err(format!("{e}")))? {
            AcResult::Classified { family, spheres } => {
                let name = match family {
                    Family::C(n) => format!("C({n})"),
                    Family::D(m) => format!("D({m})"),
                };
                Ok(format!("{name} + {spheres} S^2"))
            }
            AcResult::InfiniteDetected => Ok("infinite".into()),
        }
    }
}

impl Shadow {
    fn check_valid(&self) -> PyResult<()> {
        self.g.validate().map_err(|e| PyValueError::new_err(format!("{e}")))
    }
}

/// Determinant of the linear plumbing with the given framings (as a
/// decimal string, since it can exceed machine integers).
#[pyfunction]
fn plumb_det(framings: Vec<i64>) -> String {
    plumbing_det(&framings).to_string()
}

/// Debug rendering of a reduction-pattern witness, or `None`.
#[pyfunction]
fn plumb_witness(framings: Vec<i64>) -> Option<String> {
    plumbing_pattern_witness(&framings).map(|w| format!("{w:?}"))
}

/// Boundary 4-manifolds of the thickenings of `C:n` or `D:2n`, as
/// (name, spin, even, spin_cover_count) tuples.
#[pyfunction]
fn classify_sp(spec: &str) -> PyResult<Vec<(String, bool, bool, Option<u32>)>> {
    let input = parse_presentation_spec(spec).map_err(PyValueError::new_err)?;
    let PresentationInput::Family(f) = input else {
        return Err(PyValueError::new_err("expected a family spec `C:n` or `D:2n`"));
    };
    let labels = classify_s(f).map_err(PyValueError::new_err)?;
    Ok(labels
        .into_iter()
        .map(|l| (l.name, l.spin, l.even, l.spin_cover_count))
        .collect())
}

/// Random block composition with a known decomposition: returns the
/// graph text and the expected decomposition key.
#[pyfunction]
fn fuzz(seed: u64, size: usize) -> (String, String) {
    let (g, d) = fuzz_block(seed, size);
    (emit_text(&g), d.signature_key())
}

#[pymodule]
fn shadow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Shadow>()?;
    m.add_function(wrap_pyfunction!(plumb_det, m)?)?;
    m.add_function(wrap_pyfunction!(plumb_witness, m)?)?;
    m.add_function(wrap_pyfunction!(classify_sp, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz, m)?)?;
    Ok(())
}
