use num_rational::BigRational;

use super::{CoefficientModel, ModelId, RingElement};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MorphismKind {
    /// `Z-trivial -> Zp:p:prec`, reduction with valuation.
    IntToZp,
    /// `Q-na -> Qp:p`, identity on rationals.
    QnaToQp,
    /// `Z-trivial -> Q-na` or `Z-trivial -> Qp:p`.
    IntToQ,
    Identity,
}

/// A contracting ring morphism between two coefficient models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingMorphism {
    source: CoefficientModel,
    target: CoefficientModel,
    kind: MorphismKind,
}

impl RingMorphism {
    pub fn new(kind: MorphismKind, source: CoefficientModel, target: CoefficientModel) -> Result<Self> {
        let ok = match (kind, source.id(), target.id()) {
            (MorphismKind::IntToZp, ModelId::TrivialInt, ModelId::TruncatedZp { .. }) => true,
            (MorphismKind::QnaToQp, ModelId::SupRational, ModelId::PAdicRational { .. }) => true,
            (MorphismKind::IntToQ, ModelId::TrivialInt, ModelId::SupRational)
            | (MorphismKind::IntToQ, ModelId::TrivialInt, ModelId::PAdicRational { .. }) => true,
            (MorphismKind::Identity, s, t) => s == t,
            _ => false,
        };
        if ok {
            Ok(RingMorphism { source, target, kind })
        } else {
            Err(Error::InvalidMorphism(format!("{kind:?} from {source} to {target}")))
        }
    }

    pub fn int_to_zp(p: u64, precision: u32) -> Result<Self> {
        Self::new(
            MorphismKind::IntToZp,
            CoefficientModel::trivial_int(),
            CoefficientModel::truncated_zp(p, precision)?,
        )
    }

    pub fn qna_to_qp(p: u64) -> Result<Self> {
        Self::new(
            MorphismKind::QnaToQp,
            CoefficientModel::sup_rational(),
            CoefficientModel::padic_rational(p)?,
        )
    }

    pub fn identity(model: CoefficientModel) -> Self {
        RingMorphism {
            source: model,
            target: model,
            kind: MorphismKind::Identity,
        }
    }

    /// Picks the canonical morphism between two models, if there is one.
    pub fn between(source: CoefficientModel, target: CoefficientModel) -> Result<Self> {
        [
            MorphismKind::Identity,
            MorphismKind::IntToZp,
            MorphismKind::QnaToQp,
            MorphismKind::IntToQ,
        ]
        .into_iter()
        .find_map(|k| Self::new(k, source, target).ok())
        .ok_or_else(|| Error::InvalidMorphism(format!("no canonical morphism {source} -> {target}")))
    }

    pub fn source(&self) -> CoefficientModel {
        self.source
    }

    pub fn target(&self) -> CoefficientModel {
        self.target
    }

    pub fn kind(&self) -> MorphismKind {
        self.kind
    }

    pub fn apply(&self, x: &RingElement) -> Result<RingElement> {
        apply_morphism(self, x)
    }
}

pub fn apply_morphism(m: &RingMorphism, x: &RingElement) -> Result<RingElement> {
    m.source.check(x)?;
    match (m.kind, x) {
        (MorphismKind::Identity, _) => Ok(x.clone()),
        (MorphismKind::IntToZp, RingElement::Int(n)) => Ok(m.target.from_integer(n)),
        (MorphismKind::IntToQ, RingElement::Int(n)) => Ok(RingElement::Rat(BigRational::from_integer(n.clone()))),
        (MorphismKind::QnaToQp, RingElement::Rat(q)) => Ok(RingElement::Rat(q.clone())),
        _ => unreachable!("carrier checked"),
    }
}
