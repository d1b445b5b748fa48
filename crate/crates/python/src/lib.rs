//! Python bindings: instances, spaces and frames as small wrapper classes.
//!
//! Sets cross the boundary as lists of element names and families as lists
//! of such lists, always in element order.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use nearness::admissibility::AdmissibilityReport;
use nearness::files::{names_of, InstanceFile, SpaceFile};
use nearness::props::{self, Suite};
use nearness::{FiniteFrame, FiniteSpace, Mask, NearnessError, NearnessInstance, Priming, Role};

create_exception!(nearness_py, NearnessValueError, PyValueError);
create_exception!(nearness_py, BoundExceeded, NearnessValueError);

fn py_err(e: NearnessError) -> PyErr {
    match e {
        NearnessError::BoundExceeded { .. } => BoundExceeded::new_err(e.to_string()),
        _ => NearnessValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for nearness::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

type Family = Vec<Vec<String>>;

/// (check name, "pass" | "skipped" | "fail" | "info", detail)
fn suite_rows(s: Suite) -> Vec<(String, String, String)> {
    s.checks
        .into_iter()
        .map(|c| {
            let (kind, detail) = match c.outcome {
                props::Outcome::Pass => ("pass", String::new()),
                props::Outcome::Skipped(w) => ("skipped", w),
                props::Outcome::Fail(w) => ("fail", w),
                props::Outcome::Info(w) => ("info", w),
            };
            (c.name, kind.to_string(), detail)
        })
        .collect()
}

/// A finite poset with a family Θ of subsets.
#[pyclass(module = "nearness_py", name = "Instance", frozen)]
struct PyInstance {
    inner: NearnessInstance,
}

impl PyInstance {
    fn family(&self, masks: &[Mask]) -> Family {
        masks.iter().map(|&m| names_of(self.inner.poset(), m)).collect()
    }

    fn mask(&self, names: &[String]) -> PyResult<Mask> {
        Ok(self.inner.poset().set_from_names(names).py()?.bits())
    }

    fn index(&self, name: &str) -> PyResult<usize> {
        self.inner.poset().index_of(name).py()
    }
}

#[pymethods]
impl PyInstance {
    /// `order` lists pairs (p, q) with p ≤ q; the reflexive-transitive closure is taken.
    #[new]
    #[pyo3(signature = (elements, order = Vec::new(), theta = Vec::new()))]
    fn new(elements: Vec<String>, order: Vec<(String, String)>, theta: Family) -> PyResult<Self> {
        let f = InstanceFile {
            elements,
            order: order.into_iter().map(|(p, q)| [p, q]).collect(),
            theta,
            frame: None,
        };
        Ok(PyInstance {
            inner: f.to_instance().py()?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyInstance {
            inner: InstanceFile::parse(text).py()?.to_instance().py()?,
        })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyInstance {
            inner: InstanceFile::load(&path).py()?.to_instance().py()?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        Ok(InstanceFile::from_instance(&self.inner).py()?.to_json())
    }

    #[getter]
    fn elements(&self) -> Vec<String> {
        self.inner.poset().names().to_vec()
    }

    /// Θ with duplicates removed, in listed order.
    #[getter]
    fn theta(&self) -> Family {
        self.family(self.inner.generator_masks())
    }

    fn le(&self, p: &str, q: &str) -> PyResult<bool> {
        Ok(self.inner.poset().le(self.index(p)?, self.index(q)?))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Instance(elements={:?}, theta={:?})", self.elements(), self.theta())
    }

    /// The round Cauchy up-sets, ascending.
    fn spectrum(&self) -> PyResult<Family> {
        Ok(self.family(self.inner.spectrum().py()?.point_masks()))
    }

    fn is_cauchy(&self, s: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.is_cauchy_mask(self.mask(&s)?))
    }

    fn in_theta_le(&self, s: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.in_theta_le_mask(self.mask(&s)?))
    }

    /// A witness D for S being Θ^≤-near, or None.
    fn near_witness(&self, s: Vec<String>) -> PyResult<Option<Vec<String>>> {
        let m = self.mask(&s)?;
        Ok(self.inner.near_witness_mask(m).map(|d| names_of(self.inner.poset(), d)))
    }

    fn is_near(&self, s: Vec<String>) -> PyResult<bool> {
        Ok(self.near_witness(s)?.is_some())
    }

    /// The star of `p` in the cover C.
    fn star(&self, cover: Vec<String>, p: &str) -> PyResult<Vec<String>> {
        let c = self.mask(&cover)?;
        let s = self.inner.star_mask(c, self.index(p)?).py()?;
        Ok(names_of(self.inner.poset(), s))
    }

    /// Minimal members of Θ|S.
    fn restriction(&self, s: Vec<String>) -> PyResult<Family> {
        let r = self.inner.restriction_mask(self.mask(&s)?).py()?;
        Ok(self.family(&r.minimal_member_masks()))
    }

    /// Pairs (p, q) with p ⊲ q.
    fn below(&self) -> PyResult<Vec<(String, String)>> {
        let rel = self.inner.below_relations().py()?;
        let p = self.inner.poset();
        Ok(rel
            .pairs()
            .into_iter()
            .map(|(a, b)| (p.name(a).to_string(), p.name(b).to_string()))
            .collect())
    }

    /// Θ^R; `priming` is "stage-local" or "original".
    #[pyo3(signature = (priming = "stage-local"))]
    fn regularise(&self, priming: &str) -> PyResult<PyInstance> {
        let priming = match priming {
            "stage-local" => Priming::StageLocal,
            "original" => Priming::Original,
            other => return Err(PyValueError::new_err(format!("unknown priming `{other}`"))),
        };
        Ok(PyInstance {
            inner: self.inner.regularise(priming).py()?.instance,
        })
    }

    /// Admissibility predicates by name.
    fn admissibility(&self) -> PyResult<Vec<(String, bool)>> {
        let r = AdmissibilityReport::compute(&self.inner).py()?;
        Ok(vec![
            ("weakly".into(), r.weakly),
            ("wallman".into(), r.wallman),
            ("picado_pultr".into(), r.picado_pultr),
            ("admissible".into(), r.admissible),
            ("admissible_vacuous".into(), r.admissible_vacuous),
        ])
    }

    /// Every instance-level proposition as (name, outcome, detail).
    fn check(&self) -> PyResult<Vec<(String, String, String)>> {
        Ok(suite_rows(props::check_instance(&self.inner).py()?))
    }
}

/// A finite set family on named points.
#[pyclass(module = "nearness_py", name = "Space", frozen)]
struct PySpace {
    inner: FiniteSpace,
}

#[pymethods]
impl PySpace {
    /// `sets` is a list of (name, members); `role` is "subbasis" or "basis".
    #[new]
    #[pyo3(signature = (points, sets, role = "subbasis"))]
    fn new(points: Vec<String>, sets: Vec<(String, Vec<String>)>, role: &str) -> PyResult<Self> {
        let role = match role {
            "subbasis" => Role::Subbasis,
            "basis" => Role::Basis,
            other => return Err(PyValueError::new_err(format!("unknown role `{other}`"))),
        };
        Ok(PySpace {
            inner: FiniteSpace::new(&points, &sets, role).py()?,
        })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PySpace {
            inner: SpaceFile::load(&path).py()?.space().py()?,
        })
    }

    fn is_t1(&self) -> bool {
        self.inner.is_t1_family()
    }

    /// The instance over the family poset with Θ = every cover of X.
    fn cover_instance(&self) -> PyResult<PyInstance> {
        Ok(PyInstance {
            inner: self.inner.cover_family(nearness::CoverMode::All).py()?,
        })
    }

    /// Concrete-space propositions as (name, outcome, detail).
    #[pyo3(signature = (seed = 0))]
    fn check(&self, seed: u64) -> PyResult<Vec<(String, String, String)>> {
        Ok(suite_rows(props::check_space(&self.inner, None, seed).py()?))
    }
}

/// A finite distributive lattice read as a frame.
#[pyclass(module = "nearness_py", name = "Frame", frozen)]
struct PyFrame {
    inner: FiniteFrame,
}

#[pymethods]
impl PyFrame {
    /// Uses the order of `instance`; raises if it is not a distributive lattice.
    #[new]
    fn new(instance: &PyInstance) -> PyResult<Self> {
        Ok(PyFrame {
            inner: FiniteFrame::new(instance.inner.poset_arc().clone()).py()?,
        })
    }

    fn heyting(&self, p: &str, q: &str) -> PyResult<String> {
        let po = self.inner.poset();
        let r = self.inner.heyting(po.index_of(p).py()?, po.index_of(q).py()?);
        Ok(po.name(r).to_string())
    }

    /// Frame laws, plus the Θ-dependent checks when `instance` has a nonempty Θ.
    #[pyo3(signature = (instance = None))]
    fn check(&self, instance: Option<&PyInstance>) -> PyResult<Vec<(String, String, String)>> {
        let theta = instance.map(|i| &i.inner).filter(|n| !n.theta_is_empty());
        Ok(suite_rows(props::check_frame(&self.inner, theta).py()?))
    }
}

/// Runs the command-line tool in process: (exit code, stdout, stderr).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = nearness::cli::run(std::iter::once("nearness".to_string()).chain(args), &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

#[pymodule]
fn nearness_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySpace>()?;
    m.add_class::<PyFrame>()?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("NearnessValueError", m.py().get_type::<NearnessValueError>())?;
    m.add("BoundExceeded", m.py().get_type::<BoundExceeded>())?;
    Ok(())
}
