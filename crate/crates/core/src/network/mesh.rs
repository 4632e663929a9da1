use serde::{Deserialize, Serialize};

use crate::network::NmziParams;
use crate::{Error, Real, Result};

/// One layer of the brick-wall NMZI layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshLayer {
    /// 1-based layer index; odd layers are offset, even layers aligned.
    pub index: usize,
    pub pairs: Vec<(usize, usize)>,
}

/// Serialized description of a mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshDescription {
    pub modes: usize,
    pub depth: usize,
    pub phi_b: f64,
    pub layout: Vec<Vec<(usize, usize)>>,
    pub corrections: bool,
}

/// Layout of the nonlinear variational core plus correction settings.
///
/// The mesh stores structure only. Nonlinearity strengths are supplied as a
/// flat vector ordered layer by layer, block by block, `(chi1, chi2)` per block.
#[derive(Debug, Clone, PartialEq)]
pub struct NmziMesh<T> {
    modes: usize,
    depth: usize,
    phi_b: T,
    biases: Option<Vec<T>>,
    corrections: bool,
    layers: Vec<MeshLayer>,
}

fn layer_pairs(modes: usize, index: usize) -> Vec<(usize, usize)> {
    let start = if index % 2 == 1 { 1 } else { 0 };
    (start..)
        .step_by(2)
        .take_while(|&i| i + 1 < modes)
        .map(|i| (i, i + 1))
        .collect()
}

impl<T: Real> NmziMesh<T> {
    /// Mesh of `depth` layers over an even number of modes, with a uniform bias
    /// and trainable corrections enabled.
    pub fn new(modes: usize, depth: usize, phi_b: T) -> Result<Self> {
        if modes < 2 || modes % 2 != 0 {
            return Err(Error::shape(format!("mesh needs an even number of modes >= 2, got {modes}")));
        }
        let layers = (1..=depth)
            .map(|index| MeshLayer { index, pairs: layer_pairs(modes, index) })
            .collect();
        Ok(NmziMesh { modes, depth, phi_b, biases: None, corrections: true, layers })
    }

    pub fn with_corrections(mut self, enabled: bool) -> Self {
        self.corrections = enabled;
        self
    }

    /// Override the bias block by block, in parameter order.
    pub fn with_block_biases(mut self, biases: Vec<T>) -> Result<Self> {
        let blocks = self.block_count();
        if biases.len() != blocks {
            return Err(Error::ParamCount { expected: blocks, got: biases.len() });
        }
        self.biases = Some(biases);
        Ok(self)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn qubits(&self) -> usize {
        self.modes / 2
    }

    pub fn phi_b(&self) -> T {
        self.phi_b
    }

    pub fn corrections(&self) -> bool {
        self.corrections
    }

    pub fn layers(&self) -> &[MeshLayer] {
        &self.layers
    }

    pub fn block_count(&self) -> usize {
        self.layers.iter().map(|l| l.pairs.len()).sum()
    }

    /// Number of trainable nonlinearities.
    pub fn nonlinear_params(&self) -> usize {
        2 * self.block_count()
    }

    /// Number of correction phases, zero when corrections are frozen.
    pub fn correction_params(&self) -> usize {
        if self.corrections {
            4 * self.qubits()
        } else {
            0
        }
    }

    pub fn trainable_params(&self) -> usize {
        self.nonlinear_params() + self.correction_params()
    }

    pub fn block_bias(&self, block: usize) -> T {
        match &self.biases {
            Some(b) => b[block],
            None => self.phi_b,
        }
    }

    /// Bind a strength vector to the layout, layer by layer.
    pub fn bind(&self, chi: &[T]) -> Result<Vec<Vec<((usize, usize), NmziParams<T>)>>> {
        let expected = self.nonlinear_params();
        if chi.len() != expected {
            return Err(Error::ParamCount { expected, got: chi.len() });
        }
        let mut block = 0;
        Ok(self
            .layers
            .iter()
            .map(|layer| {
                layer
                    .pairs
                    .iter()
                    .map(|&pair| {
                        let p = NmziParams::new(chi[2 * block], chi[2 * block + 1], self.block_bias(block));
                        block += 1;
                        (pair, p)
                    })
                    .collect()
            })
            .collect())
    }

    pub fn describe(&self) -> MeshDescription {
        MeshDescription {
            modes: self.modes,
            depth: self.depth,
            phi_b: self.phi_b.as_f64(),
            layout: self.layers.iter().map(|l| l.pairs.clone()).collect(),
            corrections: self.corrections,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.describe())?)
    }

    /// Rebuild a mesh from its description; the layout must match the rule.
    pub fn from_description(desc: &MeshDescription) -> Result<Self> {
        let mesh = NmziMesh::new(desc.modes, desc.depth, T::lit(desc.phi_b))?.with_corrections(desc.corrections);
        let layout: Vec<Vec<(usize, usize)>> = mesh.layers.iter().map(|l| l.pairs.clone()).collect();
        if layout != desc.layout {
            return Err(Error::Config("mesh layout does not follow the brick-wall rule".into()));
        }
        Ok(mesh)
    }
}
