use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::IntMatrix;
use super::normal_form::smith_normal_form_with;

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k`
/// with `d₁ | d₂ | … | d_k` and every `dᵢ ≥ 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_factors", deserialize_with = "de_factors")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Builds the invariants of `Z^free_rank ⊕ ⨁ Z/orders[i]` for arbitrary
    /// cyclic orders; units are dropped and zeros count as free summands.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let mut free = free_rank;
        let nontrivial: Vec<BigInt> = orders
            .iter()
            .filter_map(|o| {
                if o.is_zero() {
                    free += 1;
                    None
                } else if o.abs().is_one() {
                    None
                } else {
                    Some(o.abs())
                }
            })
            .collect();
        let already_chain = nontrivial.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        if already_chain {
            return AbelianInvariants {
                free_rank: free,
                torsion: nontrivial,
            };
        }
        let k = nontrivial.len();
        let mut d = IntMatrix::zeros(k, k);
        for (i, o) in nontrivial.into_iter().enumerate() {
            d[(i, i)] = o;
        }
        let snf = smith_normal_form_with(&d, false);
        AbelianInvariants {
            free_rank: free,
            torsion: snf.invariant_factors,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn torsion_part(&self) -> AbelianInvariants {
        AbelianInvariants {
            free_rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn direct_sum(&self, other: &AbelianInvariants) -> AbelianInvariants {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }

    /// The `p`-primary part of the torsion subgroup.
    pub fn p_part(&self, p: u64) -> AbelianInvariants {
        let p = BigInt::from(p);
        let torsion = self
            .torsion
            .iter()
            .map(|d| {
                let mut q = BigInt::one();
                let mut rest = d.clone();
                while rest.is_multiple_of(&p) {
                    rest /= &p;
                    q *= &p;
                }
                q
            })
            .filter(|q| !q.is_one())
            .collect();
        AbelianInvariants {
            free_rank: 0,
            torsion,
        }
    }

    /// Torsion factors as machine integers, if they fit.
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(ToPrimitive::to_u64).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        // group equal factors: (Z/2)^4
        let mut i = 0;
        while i < self.torsion.len() {
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == self.torsion[i] {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{}", self.torsion[i]));
            } else {
                parts.push(format!("(Z/{})^{}", self.torsion[i], j - i));
            }
            i = j;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn ser_factors<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_u64() {
            Some(small) => seq.serialize_element(&small)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

fn de_factors<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Factor {
        Small(u64),
        Text(String),
    }
    let raw: Vec<Factor> = Vec::deserialize(d)?;
    raw.into_iter()
        .map(|f| match f {
            Factor::Small(x) => Ok(BigInt::from(x)),
            Factor::Text(t) => t.parse().map_err(serde::de::Error::custom),
        })
        .collect()
}
