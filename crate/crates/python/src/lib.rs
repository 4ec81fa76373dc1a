use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use closet_core::fixtures::generate_seeded;
use closet_core::pipeline::{analyze_path, edge_stage};
use closet_core::training::{model_to_string, TrainingImage};
use closet_core::{
    ClothingClass, EdgeFisConfig, Error, FeatureVector, ImageKind, PipelineConfig, TrainedModel,
};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = String>>(s: &str) -> PyResult<T> {
    s.parse().map_err(PyValueError::new_err)
}

#[pyclass(name = "MembershipFunction", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMembershipFunction(closet_core::MembershipFunction);

#[pymethods]
impl PyMembershipFunction {
    #[staticmethod]
    fn gaussian(center: f64, sigma: f64) -> PyResult<Self> {
        closet_core::MembershipFunction::gaussian(center, sigma)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn triangular(a: f64, b: f64, c: f64) -> PyResult<Self> {
        closet_core::MembershipFunction::triangular(a, b, c)
            .map(Self)
            .map_err(to_py)
    }

    fn __call__(&self, x: f64) -> f64 {
        self.0.eval(x)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "FeatureVector", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFeatureVector(FeatureVector);

#[pymethods]
impl PyFeatureVector {
    #[getter]
    fn m1(&self) -> f64 {
        self.0.m1
    }

    #[getter]
    fn mean_val(&self) -> f64 {
        self.0.mean_val
    }

    #[getter]
    fn valid_rows(&self) -> (usize, usize, usize) {
        let [a, b, c] = self.0.valid_rows;
        (a, b, c)
    }

    fn __repr__(&self) -> String {
        format!(
            "FeatureVector(m1={}, mean_val={}, valid_rows={:?})",
            self.0.m1, self.0.mean_val, self.0.valid_rows
        )
    }
}

#[pyclass(name = "Classification", frozen)]
struct PyClassification(closet_core::Classification);

#[pymethods]
impl PyClassification {
    #[getter]
    fn label(&self) -> &'static str {
        self.0.label.as_str()
    }

    #[getter]
    fn score(&self) -> f64 {
        self.0.score
    }

    #[getter]
    fn indeterminate(&self) -> bool {
        self.0.indeterminate
    }

    #[getter]
    fn features(&self) -> PyFeatureVector {
        PyFeatureVector(self.0.features)
    }

    fn __repr__(&self) -> String {
        format!(
            "Classification(label={:?}, score={:.6}, indeterminate={})",
            self.0.label.as_str(),
            self.0.score,
            self.0.indeterminate
        )
    }
}

/// A trained classifier: class statistics, the identify FIS and the
/// pipeline settings used to train it.
#[pyclass(name = "Model", frozen)]
struct PyModel(TrainedModel);

#[pymethods]
impl PyModel {
    /// Train from `(path, label, kind)` tuples with default settings.
    #[staticmethod]
    fn train(py: Python<'_>, images: Vec<(PathBuf, String, String)>) -> PyResult<Self> {
        let images = images
            .into_iter()
            .map(|(path, label, kind)| {
                Ok(TrainingImage {
                    path,
                    label: parse(&label)?,
                    kind: parse(&kind)?,
                })
            })
            .collect::<PyResult<Vec<_>>>()?;
        let cfg = PipelineConfig::default();
        py.detach(|| closet_core::train(&images, &cfg))
            .map(|outcome| PyModel(outcome.model))
            .map_err(to_py)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        closet_core::load_model(path).map(PyModel).map_err(to_py)
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        closet_core::save_model(&self.0, path).map_err(to_py)
    }

    fn to_toml(&self) -> PyResult<String> {
        model_to_string(&self.0).map_err(to_py)
    }

    #[pyo3(signature = (path, kind = "photo"))]
    fn classify(&self, py: Python<'_>, path: PathBuf, kind: &str) -> PyResult<PyClassification> {
        let kind: ImageKind = parse(kind)?;
        py.detach(|| closet_core::classify(&path, &self.0, kind))
            .map(PyClassification)
            .map_err(to_py)
    }

    fn classify_features(&self, m1: f64, mean_val: f64) -> PyClassification {
        let fv = FeatureVector {
            m1,
            mean_val,
            valid_rows: [0, 0, 0],
        };
        PyClassification(closet_core::classify_features(&fv, &self.0))
    }

    /// `(mean, std)` of m1 for a class.
    fn m1_stats(&self, class: &str) -> PyResult<(f64, f64)> {
        let s = self.0.stats.m1(parse::<ClothingClass>(class)?);
        Ok((s.mean, s.std))
    }
}

/// Features of one image with default pipeline settings.
#[pyfunction]
#[pyo3(signature = (path, kind = "photo"))]
fn extract_features(py: Python<'_>, path: PathBuf, kind: &str) -> PyResult<PyFeatureVector> {
    let kind: ImageKind = parse(kind)?;
    let cfg = PipelineConfig::default();
    py.detach(|| analyze_path(&path, kind, &cfg))
        .map(|ex| PyFeatureVector(ex.features))
        .map_err(to_py)
}

/// Writes the border-whitened edge map of `path` to `out_png`.
#[pyfunction]
#[pyo3(signature = (path, out_png, kind = "photo"))]
fn write_edge_map(py: Python<'_>, path: PathBuf, out_png: PathBuf, kind: &str) -> PyResult<()> {
    let kind: ImageKind = parse(kind)?;
    let cfg = PipelineConfig::default();
    py.detach(|| {
        let img = closet_core::load_and_gray(&path)?;
        edge_stage(&img, kind, &cfg)?.image().save_png(&out_png)
    })
    .map_err(to_py)
}

/// Raw edge-FIS output for one pair of gradients.
#[pyfunction]
#[pyo3(signature = (ix, iy, sigma = 0.1))]
fn edge_fis(ix: f64, iy: f64, sigma: f64) -> PyResult<f64> {
    let fis = EdgeFisConfig::with_sigma(sigma).build_fis().map_err(to_py)?;
    fis.evaluate(&[ix, iy]).map(|o| o.value).map_err(to_py)
}

/// Writes a synthetic silhouette PNG and its ground-truth outline.
#[pyfunction]
#[pyo3(signature = (class_name, seed, png, truth = None))]
fn generate_fixture(class_name: &str, seed: u64, png: PathBuf, truth: Option<PathBuf>) -> PyResult<()> {
    let class: ClothingClass = parse(class_name)?;
    let truth = truth.unwrap_or_else(|| png.with_extension("truth.tsv"));
    generate_seeded(class, seed).write(&png, &truth).map_err(to_py)
}

#[pyfunction]
fn label_for_score(score: f64) -> &'static str {
    closet_core::label_for_score(score).as_str()
}

#[pymodule]
fn closet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMembershipFunction>()?;
    m.add_class::<PyFeatureVector>()?;
    m.add_class::<PyClassification>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(extract_features, m)?)?;
    m.add_function(wrap_pyfunction!(write_edge_map, m)?)?;
    m.add_function(wrap_pyfunction!(edge_fis, m)?)?;
    m.add_function(wrap_pyfunction!(generate_fixture, m)?)?;
    m.add_function(wrap_pyfunction!(label_for_score, m)?)?;
    Ok(())
}
