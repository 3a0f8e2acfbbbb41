//! Python bindings: models travel as JSON, formulas as strings.

use std::collections::BTreeSet;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use epimc::model::{KripkeModel, RawModel};
use epimc::syntax::Formula;
use epimc::{bisim, mc, qbf, semantics, translate, updates};

fn err(e: epimc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse(text: &str) -> PyResult<Formula> {
    epimc::parse_formula(text).map_err(err)
}

fn to_set(items: Vec<String>) -> BTreeSet<String> {
    items.into_iter().collect()
}

/// A pointed Kripke model. The point is optional; methods that need a world
/// take one explicitly or fall back to the point.
#[pyclass]
#[derive(Clone)]
struct Model {
    inner: KripkeModel,
    #[pyo3(get)]
    point: Option<String>,
}

impl Model {
    fn world_or_point(&self, world: Option<String>) -> PyResult<String> {
        world
            .or_else(|| self.point.clone())
            .ok_or_else(|| PyValueError::new_err("no world given and the model has no point"))
    }

    fn atoms_or_all(&self, atoms: Option<Vec<String>>) -> BTreeSet<String> {
        atoms.map(to_set).unwrap_or_else(|| self.inner.atoms())
    }

    fn rebuilt(&self, inner: KripkeModel) -> Model {
        let point = self.point.clone().filter(|p| inner.has_world(p));
        Model { inner, point }
    }
}

#[pymethods]
impl Model {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Model> {
        let raw = RawModel::from_json(text).map_err(err)?;
        let (inner, point) = raw.build().map_err(err)?;
        Ok(Model { inner, point })
    }

    fn to_json(&self) -> String {
        self.inner.to_raw(self.point.as_deref()).to_json()
    }

    fn worlds(&self) -> Vec<String> {
        self.inner.worlds().iter().cloned().collect()
    }

    fn agents(&self) -> Vec<String> {
        self.inner.agents().iter().cloned().collect()
    }

    fn atoms(&self) -> Vec<String> {
        self.inner.atoms().into_iter().collect()
    }

    /// Truth of a formula at a world; quantified formulas are supported.
    #[pyo3(signature = (formula, world = None))]
    fn check(&self, formula: &str, world: Option<String>) -> PyResult<bool> {
        let f = parse(formula)?;
        let w = self.world_or_point(world)?;
        if f.has_quantifier() {
            mc::check_quantified(&self.inner, &w, &f).map_err(err)
        } else {
            semantics::eval(&self.inner, &w, &f).map_err(err)
        }
    }

    /// All worlds where the formula holds.
    fn truthset(&self, formula: &str) -> PyResult<Vec<String>> {
        let f = parse(formula)?;
        let set = if f.has_quantifier() {
            mc::truthset_quantified(&self.inner, &f).map_err(err)?
        } else {
            mc::global_mc(&self.inner, &f).map_err(err)?.truthset()
        };
        Ok(set.into_iter().collect())
    }

    /// Update by the group sharing everything up to the topic formula.
    fn share(&self, group: Vec<String>, topic: &str) -> PyResult<Model> {
        let truth = semantics::truthset(&self.inner, &parse(topic)?).map_err(err)?;
        let updated =
            updates::partial_comm_update(&self.inner, &to_set(group), &truth).map_err(err)?;
        Ok(self.rebuilt(updated))
    }

    /// Public announcement: delete edges crossing the truth set, or delete
    /// the refuting worlds when `remove_worlds` is set.
    #[pyo3(signature = (formula, remove_worlds = false))]
    fn announce(&self, formula: &str, remove_worlds: bool) -> PyResult<Model> {
        let truth = semantics::truthset(&self.inner, &parse(formula)?).map_err(err)?;
        let updated = if remove_worlds {
            updates::pa_world_update(&self.inner, &truth).map_err(err)?
        } else {
            updates::pa_edge_update(&self.inner, &truth).map_err(err)?
        };
        Ok(self.rebuilt(updated))
    }

    /// Collective bisimulation classes with a characteristic formula each.
    #[pyo3(signature = (atoms = None))]
    fn classes(&self, atoms: Option<Vec<String>>) -> (Vec<Vec<String>>, Vec<String>) {
        let analysis = bisim::bisim_classes(&self.inner, &self.atoms_or_all(atoms));
        let blocks = analysis.blocks.iter().map(|b| b.iter().cloned().collect()).collect();
        let formulas = analysis.formulas.iter().map(epimc::print_formula).collect();
        (blocks, formulas)
    }

    /// A formula whose truth set is exactly `target`; fails unless the
    /// target is a union of bisimulation classes.
    #[pyo3(signature = (target, atoms = None))]
    fn characteristic_topic(
        &self,
        target: Vec<String>,
        atoms: Option<Vec<String>>,
    ) -> PyResult<String> {
        let f = bisim::characteristic_topic(&self.inner, &to_set(target), &self.atoms_or_all(atoms))
            .map_err(err)?;
        Ok(epimc::print_formula(&f))
    }
}

/// Parse a formula and print it back in canonical form.
#[pyfunction]
fn parse_print(text: &str) -> PyResult<String> {
    Ok(epimc::print_formula(&parse(text)?))
}

/// Collective bisimilarity of two pointed models over the given atoms
/// (all atoms of both models when omitted).
#[pyfunction]
#[pyo3(signature = (m1, w1, m2, w2, atoms = None))]
fn bisimilar(
    m1: &Model,
    w1: &str,
    m2: &Model,
    w2: &str,
    atoms: Option<Vec<String>>,
) -> PyResult<bool> {
    let atoms = atoms.map(to_set).unwrap_or_else(|| {
        m1.inner.atoms().union(&m2.inner.atoms()).cloned().collect()
    });
    bisim::is_bisimilar(&m1.inner, w1, &m2.inner, w2, &atoms).map_err(err)
}

/// Rewrite communication and announcement boxes away; the result is an
/// equivalent formula with only knowledge modalities.
#[pyfunction]
#[pyo3(name = "translate")]
fn translate_py(formula: &str) -> PyResult<String> {
    let out = translate::translate(&parse(formula)?).map_err(err)?;
    Ok(epimc::print_formula(&out))
}

/// Decide a quantified boolean formula like
/// `forall x1 exists x2 : (x1 <-> x2)` by encoding it as a model-checking
/// problem.
#[pyfunction]
fn solve_qbf(text: &str) -> PyResult<bool> {
    let inst = qbf::QbfInstance::parse(text).map_err(err)?;
    qbf::solve_by_model_checking(&inst).map_err(err)
}

#[pymodule]
fn epimc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(parse_print, m)?)?;
    m.add_function(wrap_pyfunction!(bisimilar, m)?)?;
    m.add_function(wrap_pyfunction!(translate_py, m)?)?;
    m.add_function(wrap_pyfunction!(solve_qbf, m)?)?;
    Ok(())
}
