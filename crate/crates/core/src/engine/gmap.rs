//! The determined part of the maps `g₂ⁱ` on a finite list of classes.
//!
//! Every domain summand of `g₂ⁱ` is a sum of copies of `K_q(R)`, so on the `K_q(R)`
//! parts the map is an integer matrix tensored with `K_q(R)`. Columns are the domain
//! copies class by class. Rows are the `K_q(R)` summands of the targets
//! `H_i^F[H](Comm[H])` (for the classes that have one), followed by the
//! `H_i(A_n) ⊗ K_q(R)` rows. Codomain summands that are never hit (the `N_q` parts,
//! `T₁ ⊕ T₂`, `C̄`) are not rows; the caller adds them to the cokernel.

use crate::abelian::IntMatrix;
use crate::artin::{ArtinParameters, CatalogClass};
use crate::error::EngineError;

use super::{coupling_coefficient, CenterSign, EngineConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GMap {
    G20,
    G21,
    G22,
}

/// How a domain copy of `K_q(R)` maps into the `F[H]`-homology of its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum G21Part {
    Zero,
    /// Onto the `K_q(R)` summand of `K_q(R[ℤ])`, with a sign.
    BhsInclusion(i64),
    /// Onto the `K_q(R)` summand of `C(K_q(R))`.
    BigCInclusion,
}

impl G21Part {
    fn coefficient(self) -> i128 {
        match self {
            G21Part::Zero => 0,
            G21Part::BhsInclusion(s) => s as i128,
            G21Part::BigCInclusion => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentColumn {
    pub g21: G21Part,
    /// Image in `H_i(A_n) ⊗ K_q(R)`, one coefficient per generator.
    pub g22: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassComponent {
    pub label: String,
    pub center: bool,
    /// Whether the target `H_i^F[H]` of this class has a `K_q(R)` summand.
    pub kq_row: bool,
    pub columns: Vec<ComponentColumn>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMapModel {
    pub which: GMap,
    /// Rank of `H_i(A_n)`.
    pub h_rank: usize,
    pub components: Vec<ClassComponent>,
}

impl GMapModel {
    pub fn matrix(&self) -> IntMatrix {
        let class_rows: Vec<usize> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kq_row)
            .map(|(i, _)| i)
            .collect();
        let rows = class_rows.len() + self.h_rank;
        let cols = self.components.iter().map(|c| c.columns.len()).sum();
        let mut m = IntMatrix::zeros(rows, cols);
        let mut j = 0;
        for (ci, comp) in self.components.iter().enumerate() {
            let row = class_rows.iter().position(|&r| r == ci);
            for col in &comp.columns {
                if let Some(r) = row {
                    m.set(r, j, col.g21.coefficient());
                }
                for (h, &x) in col.g22.iter().enumerate() {
                    m.set(class_rows.len() + h, j, x as i128);
                }
                j += 1;
            }
        }
        m
    }
}

fn col(g21: G21Part, g22: Vec<i64>) -> ComponentColumn {
    ComponentColumn { g21, g22 }
}

/// Components of `g₂ⁱ` on `classes`, which must contain the center.
pub fn g_map_model(
    which: GMap,
    params: &ArtinParameters,
    classes: &[CatalogClass],
    config: &EngineConfig,
) -> Result<GMapModel, EngineError> {
    if !classes.iter().any(|c| c.center) {
        return Err(EngineError::CenterRequired);
    }
    let odd = params.is_odd();
    let h_rank = match which {
        GMap::G22 => usize::from(!odd),
        GMap::G21 => params.h1_rank(),
        GMap::G20 => 1,
    };
    let center_ab = params.center_ab_vector();
    let mut components = Vec::with_capacity(classes.len());
    for c in classes {
        let (kq_row, columns) = match (which, c.center, odd) {
            (GMap::G22, true, true) => (false, vec![]),
            (GMap::G22, true, false) => (false, vec![col(G21Part::Zero, vec![1])]),
            // the non-center components are not determined; any choice has the same kernel
            (GMap::G22, false, true) => (false, vec![col(G21Part::Zero, vec![])]),
            (GMap::G22, false, false) => (
                false,
                vec![col(G21Part::Zero, vec![coupling_coefficient(&c.ab_vector, config)])],
            ),
            (GMap::G21, true, true) => (false, vec![col(G21Part::Zero, vec![1])]),
            (GMap::G21, true, false) => {
                let sign = match config.center_sign {
                    CenterSign::Plus => 1,
                    CenterSign::Minus => -1,
                };
                (
                    true,
                    vec![
                        col(G21Part::BhsInclusion(1), vec![1, 0]),
                        col(G21Part::BhsInclusion(sign), vec![0, 1]),
                    ],
                )
            }
            (GMap::G21, false, _) => (
                true,
                vec![
                    col(G21Part::Zero, c.ab_vector.clone()),
                    col(G21Part::BhsInclusion(1), center_ab.clone()),
                ],
            ),
            (GMap::G20, true, true) => (true, vec![col(G21Part::BigCInclusion, vec![1])]),
            (GMap::G20, _, _) => (true, vec![col(G21Part::BhsInclusion(1), vec![1])]),
        };
        components.push(ClassComponent {
            label: c.label.clone(),
            center: c.center,
            kq_row,
            columns,
        });
    }
    Ok(GMapModel {
        which,
        h_rank,
        components,
    })
}
