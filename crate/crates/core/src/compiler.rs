//! Time-bin loop programs, Haar-random interferometers and the scattershot
//! two-group arrangement.
//!
//! A loop program is an ordered list of gates on `m` time bins. Beamsplitter
//! gates may only couple adjacent bins, matching a single delay loop of one
//! pulse spacing. The gate list is in application order: the first gate acts
//! first, so the compiled unitary is `U = G_n ... G_2 G_1`.
//!
//! The loop beamsplitter is the real Hadamard-type block
//! `[[cos t, sin t], [sin t, -cos t]]` preceded by a phase `e^{i phi}` on its
//! first bin, so `BS(t = pi/4, phi = 0)` is `[[1, 1], [1, -1]] / sqrt 2`.
//!
//! Text form, one gate per line, bins numbered from 1:
//!
//! ```text
//! # comment
//! BS 1 2 0.7853981633974483 0
//! PHASE 2 1.5707963267948966
//! ```

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::gaussian::{unitarity_residual, ComplexMatrix, GaussianState, UNITARY_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// Couples bins `first` and `second` (0-based, adjacent).
    Beamsplitter {
        first: usize,
        second: usize,
        theta: f64,
        phi: f64,
    },
    Phase { bin: usize, phi: f64 },
}

impl Gate {
    fn check(&self, bins: usize) -> Result<()> {
        match *self {
            Gate::Beamsplitter { first, second, .. } => {
                for b in [first, second] {
                    if b >= bins {
                        return Err(Error::ModeOutOfRange { mode: b, modes: bins });
                    }
                }
                if first.abs_diff(second) != 1 {
                    return Err(Error::InvalidArgument(format!(
                        "beamsplitter must couple adjacent bins, got {} and {}",
                        first + 1,
                        second + 1
                    )));
                }
                Ok(())
            }
            Gate::Phase { bin, .. } => {
                if bin >= bins {
                    Err(Error::ModeOutOfRange { mode: bin, modes: bins })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// The gate as an `m x m` unitary.
    pub fn embedded(&self, bins: usize) -> Result<ComplexMatrix> {
        self.check(bins)?;
        let mut u = ComplexMatrix::identity(bins, bins);
        match *self {
            Gate::Beamsplitter {
                first,
                second,
                theta,
                phi,
            } => {
                let (c, s) = (theta.cos(), theta.sin());
                let pre = Complex64::from_polar(1.0, phi);
                u[(first, first)] = pre * c;
                u[(first, second)] = Complex64::new(s, 0.0);
                u[(second, first)] = pre * s;
                u[(second, second)] = Complex64::new(-c, 0.0);
            }
            Gate::Phase { bin, phi } => {
                u[(bin, bin)] = Complex64::from_polar(1.0, phi);
            }
        }
        Ok(u)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Beamsplitter {
                first,
                second,
                theta,
                phi,
            } => write!(f, "BS {} {} {:?} {:?}", first + 1, second + 1, theta, phi),
            Gate::Phase { bin, phi } => write!(f, "PHASE {} {:?}", bin + 1, phi),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopProgram {
    bins: usize,
    gates: Vec<Gate>,
}

impl LoopProgram {
    pub fn new(bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self {
            bins,
            gates: Vec::new(),
        })
    }

    pub fn with_gates(bins: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut p = Self::new(bins)?;
        for g in gates {
            p.push(g)?;
        }
        Ok(p)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check(self.bins)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Parses the text form. `bins` fixes the program width.
    pub fn parse(bins: usize, text: &str) -> Result<Self> {
        let mut program = Self::new(bins)?;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let gate = parse_gate(content).map_err(|msg| Error::Parse { line, msg })?;
            gate.check(bins).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            program.gates.push(gate);
        }
        Ok(program)
    }

    pub fn compile(&self) -> Result<CompiledInterferometer> {
        let mut u = ComplexMatrix::identity(self.bins, self.bins);
        for gate in &self.gates {
            u = gate.embedded(self.bins)? * u;
        }
        CompiledInterferometer::new(u)
    }
}

impl fmt::Display for LoopProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# bins={}", self.bins)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

fn parse_index(tok: Option<&str>) -> std::result::Result<usize, String> {
    let tok = tok.ok_or("missing bin index")?;
    let v: usize = tok.parse().map_err(|_| format!("bad bin index `{tok}`"))?;
    if v == 0 {
        return Err("bins are numbered from 1".into());
    }
    Ok(v - 1)
}

fn parse_angle(tok: Option<&str>) -> std::result::Result<f64, String> {
    let tok = tok.ok_or("missing angle")?;
    let v: f64 = tok.parse().map_err(|_| format!("bad angle `{tok}`"))?;
    if !v.is_finite() {
        return Err(format!("non-finite angle `{tok}`"));
    }
    Ok(v)
}

fn parse_gate(content: &str) -> std::result::Result<Gate, String> {
    let mut toks = content.split_whitespace();
    let kind = toks.next().unwrap_or_default();
    let gate = match kind.to_ascii_uppercase().as_str() {
        "BS" => Gate::Beamsplitter {
            first: parse_index(toks.next())?,
            second: parse_index(toks.next())?,
            theta: parse_angle(toks.next())?,
            phi: parse_angle(toks.next())?,
        },
        "PHASE" => Gate::Phase {
            bin: parse_index(toks.next())?,
            phi: parse_angle(toks.next())?,
        },
        other => return Err(format!("unknown gate `{other}`")),
    };
    if let Some(extra) = toks.next() {
        return Err(format!("unexpected token `{extra}`"));
    }
    Ok(gate)
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_gate(s.trim()).map_err(|msg| Error::Parse { line: 1, msg })
    }
}

/// An `m x m` unitary, checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledInterferometer {
    unitary: ComplexMatrix,
}

impl CompiledInterferometer {
    pub fn new(unitary: ComplexMatrix) -> Result<Self> {
        if unitary.nrows() == 0 {
            return Err(Error::ZeroModes);
        }
        if unitary.nrows() != unitary.ncols() {
            return Err(Error::Shape {
                expected: unitary.nrows(),
                rows: unitary.nrows(),
                cols: unitary.ncols(),
            });
        }
        let residual = unitarity_residual(&unitary);
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { unitary })
    }

    pub fn identity(modes: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(modes, modes))
    }

    pub fn modes(&self) -> usize {
        self.unitary.nrows()
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn into_unitary(self) -> ComplexMatrix {
        self.unitary
    }
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `diag(R)` folded back into `Q`. Deterministic per seed.
pub fn haar_random_unitary(modes: usize, seed: u64) -> Result<CompiledInterferometer> {
    if modes == 0 {
        return Err(Error::ZeroModes);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let z = DMatrix::from_fn(modes, modes, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..modes {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..modes {
            q[(i, k)] *= phase;
        }
    }
    CompiledInterferometer::new(q)
}

/// `m` two-mode squeezed pairs (herald `k`, signal `m + k`) with
/// `r = artanh(chi)`, the signal group sent through `U`.
#[derive(Debug, Clone)]
pub struct ScattershotArrangement {
    sources: usize,
    chi: f64,
    interferometer: CompiledInterferometer,
    state: GaussianState,
}

impl ScattershotArrangement {
    pub fn build(sources: usize, chi: f64, interferometer: &CompiledInterferometer) -> Result<Self> {
        if sources == 0 {
            return Err(Error::ZeroModes);
        }
        if !(chi > 0.0 && chi < 1.0) {
            return Err(Error::InvalidChi(chi));
        }
        if interferometer.modes() != sources {
            return Err(Error::DimensionMismatch(interferometer.modes(), sources));
        }
        let r = chi.atanh();
        let mut state = GaussianState::vacuum(2 * sources)?;
        for k in 0..sources {
            state = state.two_mode_squeeze(k, sources + k, r)?;
        }
        let mut full = ComplexMatrix::identity(2 * sources, 2 * sources);
        full.view_mut((sources, sources), (sources, sources))
            .copy_from(interferometer.unitary());
        let state = state.apply_unitary(&full)?;
        Ok(Self {
            sources,
            chi,
            interferometer: interferometer.clone(),
            state,
        })
    }

    pub fn sources(&self) -> usize {
        self.sources
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn interferometer(&self) -> &CompiledInterferometer {
        &self.interferometer
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }

    pub fn herald_modes(&self) -> Vec<usize> {
        (0..self.sources).collect()
    }

    pub fn signal_modes(&self) -> Vec<usize> {
        (self.sources..2 * self.sources).collect()
    }
}
