//! Structured-text form of cirquents:
//! `{"kind": "top|bot|lit|or|and|chor|chand", ...}`.

use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Cirquent, ClusterId, Kind, Letter};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Repr {
    Top,
    Bot,
    Lit { letter: String, positive: bool },
    Or { left: Box<Repr>, right: Box<Repr> },
    And { left: Box<Repr>, right: Box<Repr> },
    Chor { cluster: u32, left: Box<Repr>, right: Box<Repr> },
    Chand { cluster: u32, left: Box<Repr>, right: Box<Repr> },
}

impl From<&Cirquent> for Repr {
    fn from(c: &Cirquent) -> Self {
        let b = |c: &Arc<Cirquent>| Box::new(Repr::from(&**c));
        match c {
            Cirquent::Top => Repr::Top,
            Cirquent::Bot => Repr::Bot,
            Cirquent::Lit { letter, positive } => {
                Repr::Lit { letter: letter.to_string(), positive: *positive }
            }
            Cirquent::Par { kind: Kind::Or, left, right } => Repr::Or { left: b(left), right: b(right) },
            Cirquent::Par { kind: Kind::And, left, right } => Repr::And { left: b(left), right: b(right) },
            Cirquent::Choice { cluster, left, right } if cluster.is_disjunctive() => {
                Repr::Chor { cluster: cluster.index, left: b(left), right: b(right) }
            }
            Cirquent::Choice { cluster, left, right } => {
                Repr::Chand { cluster: cluster.index, left: b(left), right: b(right) }
            }
        }
    }
}

impl TryFrom<Repr> for Cirquent {
    type Error = super::SyntaxError;

    fn try_from(r: Repr) -> Result<Self, Self::Error> {
        let b = |r: Box<Repr>| Cirquent::try_from(*r).map(Arc::new);
        Ok(match r {
            Repr::Top => Cirquent::Top,
            Repr::Bot => Cirquent::Bot,
            Repr::Lit { letter, positive } => Cirquent::lit(Letter::new(&letter)?, positive),
            Repr::Or { left, right } => Cirquent::Par { kind: Kind::Or, left: b(left)?, right: b(right)? },
            Repr::And { left, right } => Cirquent::Par { kind: Kind::And, left: b(left)?, right: b(right)? },
            Repr::Chor { cluster, left, right } => Cirquent::Choice {
                cluster: ClusterId::disjunctive(cluster),
                left: b(left)?,
                right: b(right)?,
            },
            Repr::Chand { cluster, left, right } => Cirquent::Choice {
                cluster: ClusterId::conjunctive(cluster),
                left: b(left)?,
                right: b(right)?,
            },
        })
    }
}

impl Serialize for Cirquent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Repr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cirquent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = Repr::deserialize(d)?;
        Cirquent::try_from(repr).map_err(serde::de::Error::custom)
    }
}
