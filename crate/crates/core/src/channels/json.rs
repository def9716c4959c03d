use serde::{Deserialize, Serialize};

use super::{KrausMap, Povm};
use crate::error::{shape_err, Error, Result};
use crate::matcore::{ComplexMatrix, HermitianMatrix, MatrixJson};

/// `{"d_in": n, "d_out": m, "kraus": [matrix, ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelJson {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<MatrixJson>,
}

/// `{"effects": [matrix, ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PovmJson {
    pub effects: Vec<MatrixJson>,
}

impl TryFrom<ChannelJson> for KrausMap {
    type Error = Error;

    fn try_from(j: ChannelJson) -> Result<Self> {
        let kraus = j
            .kraus
            .into_iter()
            .map(ComplexMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        let map = KrausMap::new(kraus)?;
        if map.d_in() != j.d_in || map.d_out() != j.d_out {
            return Err(shape_err(
                format!("{} -> {}", j.d_in, j.d_out),
                format!("{} -> {}", map.d_in(), map.d_out()),
            ));
        }
        Ok(map)
    }
}

impl From<&KrausMap> for ChannelJson {
    fn from(m: &KrausMap) -> Self {
        Self {
            d_in: m.d_in(),
            d_out: m.d_out(),
            kraus: m.kraus().iter().map(MatrixJson::from).collect(),
        }
    }
}

impl TryFrom<PovmJson> for Povm {
    type Error = Error;

    fn try_from(j: PovmJson) -> Result<Self> {
        let effects = j
            .effects
            .into_iter()
            .map(|m| HermitianMatrix::new(ComplexMatrix::try_from(m)?))
            .collect::<Result<Vec<_>>>()?;
        Povm::new(effects)
    }
}

impl From<&Povm> for PovmJson {
    fn from(p: &Povm) -> Self {
        Self {
            effects: p.effects().iter().map(|m| MatrixJson::from(m.as_matrix())).collect(),
        }
    }
}

impl KrausMap {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str::<ChannelJson>(s)?.try_into()
    }
}

impl Povm {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str::<PovmJson>(s)?.try_into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_json_roundtrip_and_dim_check() {
        let map = super::super::dephasing_channel(2);
        let text = serde_json::to_string(&ChannelJson::from(&map)).unwrap();
        assert_eq!(KrausMap::from_json_str(&text).unwrap(), map);
        let bad = text.replace("\"d_in\":2", "\"d_in\":3");
        assert!(KrausMap::from_json_str(&bad).is_err());
    }

    #[test]
    fn povm_json_roundtrip() {
        let p = Povm::computational(3);
        let text = serde_json::to_string(&PovmJson::from(&p)).unwrap();
        assert_eq!(Povm::from_json_str(&text).unwrap(), p);
    }
}
