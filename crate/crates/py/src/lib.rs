//! Python bindings: the main types and operations of the AB flux toolkit.
//!
//! Reports and tables cross the boundary as plain dicts/lists (converted
//! through their JSON form), so the Python side needs no wrapper classes to
//! inspect them.

use abflux_core::channel::{
    encode, energy_transmission_audit, transmit, ChannelOpts, FluxAlphabet, NoiseModel, StraySite,
};
use abflux_core::constraint::{classify_default, FirstOrderLagrangian};
use abflux_core::field::{
    FieldConfiguration, GaugePrimitive, PhysicalConstants, ReceiverRegion,
};
use abflux_core::geometry::Vector2;
use abflux_core::lab::{
    convergence_study, gauge_invariance_check, region_iii_spectrum_probe, ConvergenceOpts,
    Grid2D, LevelRule,
};
use abflux_core::reduced::{config_warnings, min_trap_radius, noise_response, reduce};
use abflux_core::CoreError;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList};
use serde_json::Value;

fn err(e: CoreError) -> PyErr {
    match e {
        CoreError::InvalidInput(_) | CoreError::ConfigInvariant(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json_to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any().unbind(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any().unbind()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any().unbind()
            } else {
                n.as_f64()
                    .unwrap_or(f64::NAN)
                    .into_pyobject(py)?
                    .into_any()
                    .unbind()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

fn serialize_to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let json = serde_json::to_value(value)
        .map_err(|e| PyRuntimeError::new_err(format!("serialization failed: {e}")))?;
    json_to_py(py, &json)
}

/// Physical constants; defaults to natural units hbar = c = mu = q = 1.
#[pyclass(name = "Constants", from_py_object)]
#[derive(Clone)]
struct PyConstants {
    inner: PhysicalConstants,
}

#[pymethods]
impl PyConstants {
    #[new]
    #[pyo3(signature = (hbar=1.0, c=1.0, mu=1.0, q=1.0))]
    fn new(hbar: f64, c: f64, mu: f64, q: f64) -> PyResult<Self> {
        Ok(PyConstants {
            inner: PhysicalConstants::new(hbar, c, mu, q).map_err(err)?,
        })
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.inner.hbar
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q
    }

    /// Cyclotron frequency q B / (mu c).
    fn omega(&self, b: f64) -> f64 {
        self.inner.omega(b)
    }

    /// Magnetic length (hbar c / (q |B|))^(1/2).
    fn magnetic_length(&self, b: f64) -> f64 {
        self.inner.magnetic_length(b)
    }

    fn __repr__(&self) -> String {
        format!(
            "Constants(hbar={}, c={}, mu={}, q={})",
            self.inner.hbar, self.inner.c, self.inner.mu, self.inner.q
        )
    }
}

/// A uniform-field disk: flux source, spectator, or stray.
#[pyclass(name = "Primitive", from_py_object)]
#[derive(Clone)]
struct PyPrimitive {
    inner: GaugePrimitive,
}

#[pymethods]
impl PyPrimitive {
    #[new]
    fn new(center: (f64, f64), radius: f64, b: f64) -> PyResult<Self> {
        Ok(PyPrimitive {
            inner: GaugePrimitive::new(Vector2::new(center.0, center.1), radius, b)
                .map_err(err)?,
        })
    }

    /// Vector potential at a point, branch selected by distance.
    fn vector_potential_at(&self, p: (f64, f64)) -> PyResult<(f64, f64)> {
        let a = self
            .inner
            .vector_potential_at(Vector2::new(p.0, p.1))
            .map_err(err)?;
        Ok((a.x1, a.x2))
    }

    /// Magnetic field along z: B inside the disk, 0 outside.
    fn magnetic_field_at(&self, p: (f64, f64)) -> f64 {
        self.inner.magnetic_field_at(Vector2::new(p.0, p.1))
    }

    /// Total flux pi a^2 B.
    fn flux(&self) -> f64 {
        self.inner.flux()
    }

    /// Gauge shift removing the inside-branch constant: returns a dict with
    /// grad_chi and the centered potential evaluated at a probe point.
    fn gauge_shift(&self, py: Python<'_>, probe: (f64, f64)) -> PyResult<Py<PyAny>> {
        let shift = self.inner.gauge_shift_to_center();
        let p = Vector2::new(probe.0, probe.1);
        let dict = PyDict::new(py);
        let g = shift.grad_chi();
        let c = shift.shifted_potential_at(p);
        let r = shift.reconstruct_original_at(p);
        dict.set_item("grad_chi", (g.x1, g.x2))?;
        dict.set_item("chi_at_probe", shift.chi_at(p))?;
        dict.set_item("centered_at_probe", (c.x1, c.x2))?;
        dict.set_item("reconstructed_at_probe", (r.x1, r.x2))?;
        Ok(dict.into_any().unbind())
    }

    fn __repr__(&self) -> String {
        format!(
            "Primitive(center=({}, {}), radius={}, b={})",
            self.inner.center.x1, self.inner.center.x2, self.inner.radius, self.inner.b
        )
    }
}

/// The world model: source at the origin, spectator at (x_c, 0), strays,
/// and the receiver region ("inside_spectator" or "intervening_region").
#[pyclass(name = "Config", from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: FieldConfiguration,
}

fn parse_receiver(name: &str) -> PyResult<ReceiverRegion> {
    match name {
        "inside_spectator" => Ok(ReceiverRegion::InsideSpectator),
        "intervening_region" => Ok(ReceiverRegion::InterveningRegion),
        other => Err(PyValueError::new_err(format!(
            "receiver_region must be inside_spectator or intervening_region, got {other}"
        ))),
    }
}

#[pymethods]
impl PyConfig {
    #[new]
    #[pyo3(signature = (constants, source, spectator, strays=vec![], receiver_region="inside_spectator"))]
    fn new(
        constants: PyConstants,
        source: PyPrimitive,
        spectator: PyPrimitive,
        strays: Vec<PyPrimitive>,
        receiver_region: &str,
    ) -> PyResult<Self> {
        Ok(PyConfig {
            inner: FieldConfiguration::new(
                constants.inner,
                source.inner,
                spectator.inner,
                strays.into_iter().map(|s| s.inner).collect(),
                parse_receiver(receiver_region)?,
            )
            .map_err(err)?,
        })
    }

    /// Superposed vector potential of all primitives.
    fn total_potential_at(&self, p: (f64, f64)) -> PyResult<(f64, f64)> {
        let a = self
            .inner
            .total_potential_at(Vector2::new(p.0, p.1))
            .map_err(err)?;
        Ok((a.x1, a.x2))
    }

    fn total_field_at(&self, p: (f64, f64)) -> f64 {
        self.inner.total_field_at(Vector2::new(p.0, p.1))
    }

    /// Numerical loop integral of the total potential around a circle.
    #[pyo3(signature = (center, radius, n_start=64))]
    fn loop_integral(&self, center: (f64, f64), radius: f64, n_start: usize) -> PyResult<f64> {
        self.inner
            .loop_integral(Vector2::new(center.0, center.1), radius, n_start)
            .map_err(err)
    }

    /// Configuration warnings (trap-size bound).
    fn warnings(&self) -> Vec<String> {
        config_warnings(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Config(Phi_0={}, x_C={}, B_c={}, strays={})",
            self.inner.source.flux(),
            self.inner.spectator.center.x1,
            self.inner.spectator.b,
            self.inner.strays.len()
        )
    }
}

/// The quantized circle-II oscillator.
#[pyclass(name = "ReducedSystem", from_py_object)]
#[derive(Clone)]
struct PyReducedSystem {
    inner: abflux_core::reduced::ReducedSystem,
}

#[pymethods]
impl PyReducedSystem {
    #[getter]
    fn omega_eff(&self) -> f64 {
        self.inner.omega_eff
    }

    /// Induced fractional angular momentum q Phi_0 / (2 pi c).
    #[getter]
    fn j_ab(&self) -> f64 {
        self.inner.j_ab
    }

    fn energy_ladder(&self, n: u32) -> f64 {
        self.inner.energy_ladder(n)
    }

    fn angmom_ladder(&self, n: u32) -> f64 {
        self.inner.angmom_ladder(n)
    }

    fn ground_energy(&self) -> f64 {
        self.inner.ground_energy()
    }

    fn zero_point_j(&self) -> f64 {
        self.inner.zero_point_j()
    }

    /// A stray uniform field over circle II shifts omega_eff but never J_AB.
    fn noise_response(&self, stray_uniform_b: f64) -> PyResult<PyReducedSystem> {
        Ok(PyReducedSystem {
            inner: noise_response(&self.inner, stray_uniform_b).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "ReducedSystem(omega_eff={}, j_ab={})",
            self.inner.omega_eff, self.inner.j_ab
        )
    }
}

/// Dirac analysis of the receiver region: classification, constraint
/// matrix statistics, and the Dirac bracket, as a dict.
#[pyfunction]
#[pyo3(signature = (config, samples=64, seed=0))]
fn analyze(py: Python<'_>, config: &PyConfig, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let lagr = match config.inner.receiver_region {
        ReceiverRegion::InsideSpectator => {
            FirstOrderLagrangian::reduced_circle_ii(&config.inner).map_err(err)?
        }
        ReceiverRegion::InterveningRegion => {
            FirstOrderLagrangian::reduced_region_iii(&config.inner, 0.0).map_err(err)?
        }
    };
    let report = classify_default(&lagr, samples, seed).map_err(err)?;
    serialize_to_py(py, &report)
}

/// Quantizes the reduced circle-II system: classification plus reduction.
#[pyfunction]
#[pyo3(signature = (config, seed=0))]
fn reduce_system(config: &PyConfig, seed: u64) -> PyResult<PyReducedSystem> {
    let lagr = FirstOrderLagrangian::reduced_circle_ii(&config.inner).map_err(err)?;
    let report = classify_default(&lagr, 32, seed).map_err(err)?;
    Ok(PyReducedSystem {
        inner: reduce(&config.inner, &report).map_err(err)?,
    })
}

/// Minimum spectator radius (c hbar / (q B_c))^(1/2).
#[pyfunction]
fn trap_radius_bound(constants: &PyConstants, b_c: f64) -> PyResult<f64> {
    min_trap_radius(&constants.inner, b_c).map_err(err)
}

fn noise_from_sites(sites: Vec<((f64, f64), f64, f64)>) -> NoiseModel {
    NoiseModel {
        sites: sites
            .into_iter()
            .map(|(center, radius, max_delta_b)| StraySite {
                center: Vector2::new(center.0, center.1),
                radius,
                max_delta_b,
            })
            .collect(),
    }
}

/// Runs the flux-modulation channel and returns the full report as a dict.
/// Noise sites are ((cx, cy), radius, max_delta_b) tuples.
#[pyfunction]
#[pyo3(signature = (config, alphabet, message, seed=0, delay=None, noise_sites=vec![], observe_until=None))]
#[allow(clippy::too_many_arguments)]
fn run_channel(
    py: Python<'_>,
    config: &PyConfig,
    alphabet: Vec<f64>,
    message: Vec<usize>,
    seed: u64,
    delay: Option<f64>,
    noise_sites: Vec<((f64, f64), f64, f64)>,
    observe_until: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let alphabet = FluxAlphabet::new(alphabet).map_err(err)?;
    let schedule = encode(&message, &alphabet).map_err(err)?;
    let noise = noise_from_sites(noise_sites);
    let opts = ChannelOpts {
        seed,
        delay: delay
            .unwrap_or(config.inner.spectator.center.x1 / config.inner.constants.c),
        observe_until,
    };
    let report = transmit(&schedule, &config.inner, &noise, &opts).map_err(err)?;
    serialize_to_py(py, &report)
}

/// Recomputes every frame at fixed noise across all flux levels and returns
/// the audit dict; max_flux_energy_slope must be zero.
#[pyfunction]
#[pyo3(signature = (config, alphabet, message, seed=0, delay=None, noise_sites=vec![]))]
fn audit_channel(
    py: Python<'_>,
    config: &PyConfig,
    alphabet: Vec<f64>,
    message: Vec<usize>,
    seed: u64,
    delay: Option<f64>,
    noise_sites: Vec<((f64, f64), f64, f64)>,
) -> PyResult<Py<PyAny>> {
    let alphabet = FluxAlphabet::new(alphabet).map_err(err)?;
    let schedule = encode(&message, &alphabet).map_err(err)?;
    let noise = noise_from_sites(noise_sites);
    let opts = ChannelOpts {
        seed,
        delay: delay
            .unwrap_or(config.inner.spectator.center.x1 / config.inner.constants.c),
        observe_until: None,
    };
    let report = transmit(&schedule, &config.inner, &noise, &opts).map_err(err)?;
    let audit = energy_transmission_audit(&report, &config.inner, &noise).map_err(err)?;
    serialize_to_py(py, &audit)
}

/// Max relative deviation of the k lowest levels with the source AB tail on
/// vs off, on a disk grid of spacing h over circle II.
#[pyfunction]
#[pyo3(signature = (config, h, k=3, eig_tol=1e-8))]
fn flux_invisibility_deviation(
    config: &PyConfig,
    h: f64,
    k: usize,
    eig_tol: f64,
) -> PyResult<f64> {
    let grid = Grid2D::disk(
        config.inner.spectator.center,
        config.inner.spectator.radius,
        h,
    )
    .map_err(err)?;
    gauge_invariance_check(&config.inner, &grid, k, eig_tol).map_err(err)
}

/// Grid convergence study of the spectator-disk spectrum; level_rule is
/// "plain" or "landau". Returns rows (h, level, energy, delta) plus
/// warnings.
#[pyfunction]
#[pyo3(signature = (config, base_h, refinements=2, n_levels=3, level_rule="landau", eig_tol=1e-3))]
fn spectrum_convergence(
    py: Python<'_>,
    config: &PyConfig,
    base_h: f64,
    refinements: usize,
    n_levels: usize,
    level_rule: &str,
    eig_tol: f64,
) -> PyResult<Py<PyAny>> {
    let rule = match level_rule {
        "plain" => LevelRule::Plain,
        "landau" => LevelRule::LandauBulk,
        other => {
            return Err(PyValueError::new_err(format!(
                "level_rule must be plain or landau, got {other}"
            )))
        }
    };
    let table = convergence_study(
        &config.inner,
        &ConvergenceOpts {
            base_h,
            refinements,
            n_levels,
            level_rule: rule,
            eig_tol,
        },
    )
    .map_err(err)?;
    serialize_to_py(py, &table)
}

/// Spectrum of a hard-wall box patch in region III with both AB tails,
/// compared against the free box on the same grid.
#[pyfunction]
#[pyo3(signature = (config, center, half_w, half_h, h, k=4, eig_tol=1e-8))]
#[allow(clippy::too_many_arguments)]
fn region_iii_probe(
    py: Python<'_>,
    config: &PyConfig,
    center: (f64, f64),
    half_w: f64,
    half_h: f64,
    h: f64,
    k: usize,
    eig_tol: f64,
) -> PyResult<Py<PyAny>> {
    let grid = Grid2D::rect(Vector2::new(center.0, center.1), half_w, half_h, h).map_err(err)?;
    let probe = region_iii_spectrum_probe(&config.inner, &grid, k, eig_tol).map_err(err)?;
    serialize_to_py(py, &probe)
}

#[pymodule]
fn abflux(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConstants>()?;
    m.add_class::<PyPrimitive>()?;
    m.add_class::<PyConfig>()?;
    m.add_class::<PyReducedSystem>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_system, m)?)?;
    m.add_function(wrap_pyfunction!(trap_radius_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_channel, m)?)?;
    m.add_function(wrap_pyfunction!(audit_channel, m)?)?;
    m.add_function(wrap_pyfunction!(flux_invisibility_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_convergence, m)?)?;
    m.add_function(wrap_pyfunction!(region_iii_probe, m)?)?;
    Ok(())
}
