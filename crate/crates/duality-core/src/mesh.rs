//! Triangular MZI meshes.
//!
//! A node on modes `(i, i+1)` is `T(θ, φ) = B · diag(e^{iθ}, 1) · B ·
//! diag(e^{iφ}, 1)` with the coupler `B(η) = (cos η, i sin η; i sin η, cos η)`.
//! Ideal couplers have `η = π/4`, giving
//! `T = i e^{iθ/2} [[e^{iφ} sin(θ/2), cos(θ/2)], [e^{iφ} cos(θ/2), -sin(θ/2)]]`:
//! `θ = π` is the bar state, `θ = 0` the cross state, and `θ = φ = π` the
//! identity.
//!
//! Imperfect nodes keep unitarity but split unevenly. With
//! `sin²(2η) = 2v/(1 + v)` the bar-port fringe of a single input, swept over
//! `θ`, has contrast exactly `v`.
//!
//! A compiled mesh satisfies `U = D · T_N ⋯ T_1` with `T_1` acting first and
//! `D` the output phase screen.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bsgen::PhaseArray;
use crate::qcore::{ComplexMatrix, Unitary, C64, I, ONE};
use crate::{Error, Result};

/// Moduli below this count as exact zeros during elimination.
const NULL_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MZINode {
    /// Modes `(i, i+1)`.
    pub mode_pair: (usize, usize),
    pub internal_phase: f64,
    pub external_phase: f64,
    pub visibility: f64,
}

impl MZINode {
    pub fn ideal(top: usize, internal_phase: f64, external_phase: f64) -> Self {
        Self {
            mode_pair: (top, top + 1),
            internal_phase,
            external_phase,
            visibility: 1.0,
        }
    }

    /// Bar state that acts as the identity.
    pub fn identity(top: usize) -> Self {
        Self::ideal(top, PI, PI)
    }

    /// Coupler angle `η` giving bar-port fringe contrast `visibility`.
    pub fn coupler_angle(&self) -> f64 {
        let v = self.visibility.clamp(0.0, 1.0);
        (2.0 * v / (1.0 + v)).sqrt().min(1.0).asin() / 2.0
    }

    /// The 2×2 transfer block, rows and columns ordered `(i, i+1)`.
    pub fn matrix(&self) -> [[C64; 2]; 2] {
        let (s, c) = self.coupler_angle().sin_cos();
        let arm = C64::from_polar(1.0, self.internal_phase);
        let ext = C64::from_polar(1.0, self.external_phase);
        // B · diag(arm, 1) · B, then the input phase on the first column.
        let m00 = arm * (c * c) - s * s;
        let m01 = I * (c * s) * (arm + ONE);
        let m11 = -arm * (s * s) + c * c;
        [[m00 * ext, m01], [m01 * ext, m11]]
    }

    fn is_exact_identity(&self) -> bool {
        let m = self.matrix();
        (m[0][0] - ONE).norm() < 1e-12
            && (m[1][1] - ONE).norm() < 1e-12
            && m[0][1].norm() < 1e-12
            && m[1][0].norm() < 1e-12
    }

    /// Left-multiplies rows `(i, i+1)` of `m` by this node.
    fn apply_left(&self, m: &mut ComplexMatrix) {
        let t = self.matrix();
        let (a, b) = self.mode_pair;
        for c in 0..m.cols() {
            let (x, y) = (m[(a, c)], m[(b, c)]);
            m.set(a, c, t[0][0] * x + t[0][1] * y);
            m.set(b, c, t[1][0] * x + t[1][1] * y);
        }
    }

    /// Right-multiplies columns `(i, i+1)` of `m` by this node's adjoint.
    fn apply_right_adjoint(&self, m: &mut ComplexMatrix) {
        let t = self.matrix();
        let (a, b) = self.mode_pair;
        for r in 0..m.rows() {
            let (x, y) = (m[(r, a)], m[(r, b)]);
            m.set(r, a, x * t[0][0].conj() + y * t[0][1].conj());
            m.set(r, b, x * t[1][0].conj() + y * t[1][1].conj());
        }
    }
}

/// An output path routed away, leaving intensity `leakage` in the path.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathSwitch {
    pub path: usize,
    pub leakage: f64,
}

/// Nodes applied in order, then output phases, then path switches.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawMesh", into = "RawMesh"))]
pub struct MZIMesh {
    d: usize,
    nodes: Vec<MZINode>,
    output_phases: PhaseArray,
    switches: Vec<PathSwitch>,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct RawMesh {
    d: usize,
    nodes: Vec<MZINode>,
    output_phases: PhaseArray,
    #[serde(default)]
    switches: Vec<PathSwitch>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawMesh> for MZIMesh {
    type Error = Error;

    fn try_from(r: RawMesh) -> Result<Self> {
        Self::new(r.d, r.nodes, r.output_phases)?.with_switches(r.switches)
    }
}

#[cfg(feature = "serde")]
impl From<MZIMesh> for RawMesh {
    fn from(m: MZIMesh) -> Self {
        Self {
            d: m.d,
            nodes: m.nodes,
            output_phases: m.output_phases,
            switches: m.switches,
        }
    }
}

impl MZIMesh {
    pub fn new(d: usize, nodes: Vec<MZINode>, output_phases: PhaseArray) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if output_phases.d() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: output_phases.d(),
            });
        }
        for n in &nodes {
            let (a, b) = n.mode_pair;
            if b != a + 1 || b >= d {
                return Err(Error::InvalidParameter(format!(
                    "node modes ({a}, {b}) are not adjacent modes of a {d}-mode mesh"
                )));
            }
            if !(0.0..=1.0).contains(&n.visibility) {
                return Err(Error::InvalidParameter(format!(
                    "visibility {} outside [0,1]",
                    n.visibility
                )));
            }
            if !n.internal_phase.is_finite() || !n.external_phase.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self {
            d,
            nodes,
            output_phases,
            switches: Vec::new(),
        })
    }

    /// No nodes and zero output phases.
    pub fn empty(d: usize) -> Result<Self> {
        Self::new(d, Vec::new(), PhaseArray::zeros(d)?)
    }

    fn with_switches(mut self, switches: Vec<PathSwitch>) -> Result<Self> {
        for s in &switches {
            if s.path >= self.d {
                return Err(Error::DimensionMismatch {
                    expected: self.d,
                    found: s.path,
                });
            }
            if !(0.0..=1.0).contains(&s.leakage) {
                return Err(Error::InvalidParameter(format!("leakage {} outside [0,1]", s.leakage)));
            }
        }
        self.switches = switches;
        Ok(self)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn nodes(&self) -> &[MZINode] {
        &self.nodes
    }

    pub fn output_phases(&self) -> &PhaseArray {
        &self.output_phases
    }

    pub fn switches(&self) -> &[PathSwitch] {
        &self.switches
    }

    /// Same mesh with every node at `visibility`.
    pub fn with_visibility(&self, visibility: f64) -> Result<Self> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| MZINode { visibility, ..*n })
            .collect();
        Self::new(self.d, nodes, self.output_phases.clone())?.with_switches(self.switches.clone())
    }

    /// Drops nodes that act as the exact identity.
    pub fn prune(&self) -> Self {
        Self {
            nodes: self.nodes.iter().copied().filter(|n| !n.is_exact_identity()).collect(),
            ..self.clone()
        }
    }
}

/// Reck-style elimination: rows bottom-up, each row nulled left to right
/// with nodes on columns `(j, j+1)`. Always emits `d(d-1)/2` nodes.
pub fn compile(u: &Unitary) -> Result<MZIMesh> {
    let d = u.dim();
    let mut work = u.matrix().clone();
    let mut nodes = Vec::with_capacity(d * (d - 1) / 2);
    for i in (1..d).rev() {
        for j in 0..i {
            let (x, y) = (work[(i, j)], work[(i, j + 1)]);
            let node = if x.norm() < NULL_TOL {
                MZINode::identity(j)
            } else if y.norm() < NULL_TOL {
                MZINode::ideal(j, 0.0, 0.0)
            } else {
                MZINode::ideal(j, 2.0 * y.norm().atan2(x.norm()), (-x / y).arg())
            };
            node.apply_right_adjoint(&mut work);
            nodes.push(node);
        }
    }
    let phases = (0..d).map(|k| work[(k, k)].arg()).collect();
    MZIMesh::new(d, nodes, PhaseArray::new(phases)?)
}

/// Transfer matrix `S · D · T_N ⋯ T_1`, with `S` the path switches.
pub fn evaluate(mesh: &MZIMesh) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(mesh.d);
    for node in &mesh.nodes {
        node.apply_left(&mut m);
    }
    let mut diag: Vec<C64> = mesh
        .output_phases
        .phases()
        .iter()
        .map(|&p| C64::from_polar(1.0, p))
        .collect();
    for s in &mesh.switches {
        diag[s.path] *= s.leakage.sqrt();
    }
    ComplexMatrix::diagonal(&diag).matmul(&m).expect("square")
}

/// [`evaluate`] for meshes that must be lossless.
pub fn evaluate_unitary(mesh: &MZIMesh) -> Result<Unitary> {
    Unitary::new(evaluate(mesh))
}

/// Routes the masked output paths away, keeping residual intensity
/// `leakage` in each.
pub fn block_paths(mesh: &MZIMesh, mask: &[bool], leakage: f64) -> Result<MZIMesh> {
    if mask.len() != mesh.d {
        return Err(Error::DimensionMismatch {
            expected: mesh.d,
            found: mask.len(),
        });
    }
    if mask.iter().all(|&b| b) {
        return Err(Error::AllPathsBlocked);
    }
    let mut switches = mesh.switches.clone();
    switches.extend(
        mask.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(path, _)| PathSwitch { path, leakage }),
    );
    mesh.clone().with_switches(switches)
}

/// Haar-distributed unitary from a seeded Ginibre matrix via Gram-Schmidt.
pub fn haar_random(d: usize, seed: u64) -> Result<Unitary> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<C64>> = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    C64::new(re, im)
                })
                .collect()
        })
        .collect();
    for k in 0..d {
        for _ in 0..2 {
            for j in 0..k {
                let proj: C64 = (0..d).map(|r| cols[j][r].conj() * cols[k][r]).sum();
                for r in 0..d {
                    let v = cols[j][r];
                    cols[k][r] -= proj * v;
                }
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[k].iter_mut().for_each(|z| *z /= norm);
    }
    Unitary::new(ComplexMatrix::from_fn(d, d, |r, c| cols[c][r]))
}
