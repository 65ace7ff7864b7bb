//! Qualitative social measures and ego tools.
//!
//! Levels are classroom-relative tertiles of a raw score:
//! - popularity: in-degree on the naming graph (friendship ties of weight >= 4);
//! - mediator: betweenness on the partners graph;
//! - influence: sum of outgoing friendship weights (out-degree times mean weight).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{NodeId, SocialGraph};
use crate::metrics::{self, NodeMetrics};
use crate::network::{Networks, PARTNER_MIN_WEIGHT};
use crate::survey::{AuditZone, PersonId, PersonProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    Low,
    Medium,
    High,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Low => "Low",
            Level::Medium => "Medium",
            Level::High => "High",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("person {0} is not in the networks")]
    UnknownPerson(PersonId),
}

/// Bands by rank: with `r` values strictly below and `m = n - 1`, the value is
/// Low when `3r < m`, Medium when `3r < 2m`, High otherwise. Equal values
/// share the lower band. A single value is Low.
pub fn tertile_bands(values: &[f64]) -> Vec<Level> {
    let m = values.len().saturating_sub(1);
    values
        .iter()
        .map(|v| {
            if m == 0 {
                return Level::Low;
            }
            let r = values.iter().filter(|u| u.total_cmp(v).is_lt()).count();
            if 3 * r < m {
                Level::Low
            } else if 3 * r < 2 * m {
                Level::Medium
            } else {
                Level::High
            }
        })
        .collect()
}

/// Rounds to a 1e-9 grid so accumulated floating-point noise does not split ties.
fn quantize(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialProfile {
    pub person: PersonId,
    pub popularity: Level,
    pub mediator: Level,
    pub influence: Level,
    /// Classmates this person names with weight >= 4.
    pub declared_friends: usize,
    /// Classmates naming this person with weight >= 4.
    pub named_by: usize,
    /// Sum of outgoing friendship weights.
    pub influence_score: u32,
    pub partner_betweenness: f64,
    /// Node metrics per network name.
    pub underlying: BTreeMap<String, NodeMetrics>,
}

fn out_weight_sum(g: &SocialGraph) -> Vec<u32> {
    let mut sums = vec![0u32; g.node_count()];
    for t in g.ties() {
        sums[t.src] += u32::from(t.weight.unwrap_or(1));
    }
    sums
}

/// One profile per node, in id order.
pub fn compute_social_profiles(networks: &Networks) -> Vec<SocialProfile> {
    let n = networks.node_count();
    let naming = networks.naming();
    let naming_metrics = metrics::node_metrics(&naming);
    let per_network: Vec<(&str, Vec<NodeMetrics>)> =
        networks.iter().map(|(name, g)| (name, metrics::node_metrics(g))).collect();

    let in_degree: Vec<f64> = naming_metrics.iter().map(|m| m.in_degree as f64).collect();
    let between: Vec<f64> = metrics::betweenness_all(&networks.partners).into_iter().map(quantize).collect();
    let influence = out_weight_sum(&networks.friendship);
    let influence_f: Vec<f64> = influence.iter().map(|&x| f64::from(x)).collect();

    let popularity = tertile_bands(&in_degree);
    let mediator = tertile_bands(&between);
    let influence_level = tertile_bands(&influence_f);

    (0..n)
        .map(|v| SocialProfile {
            person: PersonId(v as u32),
            popularity: popularity[v],
            mediator: mediator[v],
            influence: influence_level[v],
            declared_friends: naming_metrics[v].out_degree,
            named_by: naming_metrics[v].in_degree,
            influence_score: influence[v],
            partner_betweenness: between[v],
            underlying: per_network
                .iter()
                .map(|(name, ms)| (name.to_string(), ms[v]))
                .collect(),
        })
        .collect()
}

pub fn compute_social_profile(person: PersonId, networks: &Networks) -> Result<SocialProfile, ProfileError> {
    if person.index() >= networks.node_count() {
        return Err(ProfileError::UnknownPerson(person));
    }
    Ok(compute_social_profiles(networks).swap_remove(person.index()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Influencer {
    pub person: PersonId,
    pub pseudonym: String,
    pub zone: AuditZone,
    pub zone_difference: u8,
    /// Strongest friendship weight between the two, either direction (0 if none).
    pub tie_weight: u8,
    pub consumption_tie: bool,
    /// In-degree on the naming graph.
    pub popularity: usize,
}

fn zone_of(profiles: &[PersonProfile], v: NodeId) -> Option<AuditZone> {
    profiles
        .iter()
        .find(|p| p.person.index() == v)
        .and_then(|p| p.audit.as_ref())
        .map(|a| a.zone)
}

/// Alters tied to the ego (friendship weight >= 3 either way, or a consumption
/// tie either way) whose AUDIT zone is strictly higher than the ego's. Ranked
/// by zone difference, tie weight and popularity (all descending), then id.
/// Empty when the ego has no AUDIT result.
pub fn find_influencers(ego: PersonId, networks: &Networks, profiles: &[PersonProfile]) -> Result<Vec<Influencer>, ProfileError> {
    let n = networks.node_count();
    let e = ego.index();
    if e >= n {
        return Err(ProfileError::UnknownPerson(ego));
    }
    let Some(ego_zone) = zone_of(profiles, e) else {
        return Ok(Vec::new());
    };
    let naming = networks.naming();
    let weight = |u: NodeId, v: NodeId| networks.friendship.tie(u, v).flatten().unwrap_or(0);
    let mut out = Vec::new();
    for c in (0..n).filter(|&c| c != e) {
        let tie_weight = weight(e, c).max(weight(c, e));
        let consumption_tie = networks.consumption.has_tie(e, c) || networks.consumption.has_tie(c, e);
        if tie_weight < PARTNER_MIN_WEIGHT && !consumption_tie {
            continue;
        }
        let Some(zone) = zone_of(profiles, c) else {
            continue;
        };
        if zone <= ego_zone {
            continue;
        }
        out.push(Influencer {
            person: PersonId(c as u32),
            pseudonym: networks.friendship.nodes()[c].label.clone(),
            zone,
            zone_difference: zone.number() - ego_zone.number(),
            tie_weight,
            consumption_tie,
            popularity: naming.ties().filter(|t| t.dst == c).count(),
        });
    }
    out.sort_by(|a, b| {
        b.zone_difference
            .cmp(&a.zone_difference)
            .then(b.tie_weight.cmp(&a.tie_weight))
            .then(b.popularity.cmp(&a.popularity))
            .then(a.person.cmp(&b.person))
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mediator {
    pub person: PersonId,
    pub pseudonym: String,
    /// Mean, over other sources that reach the ego, of the fraction of their
    /// geodesics to the ego passing through this person.
    pub share: f64,
    pub betweenness: f64,
}

/// Partners-graph nodes at most two steps from the ego (towards the ego)
/// that lie on some geodesic into the ego. Ranked by share, then global
/// betweenness (both descending), then id.
pub fn find_mediators(ego: PersonId, networks: &Networks) -> Result<Vec<Mediator>, ProfileError> {
    let g = &networks.partners;
    let e = ego.index();
    if e >= g.node_count() {
        return Err(ProfileError::UnknownPerson(ego));
    }
    let share = metrics::ego_mediation(g, e).map_err(|_| ProfileError::UnknownPerson(ego))?;
    let geo = metrics::geodesic_matrix(g);
    let between = metrics::betweenness_all(g);
    let mut out: Vec<Mediator> = (0..g.node_count())
        .filter(|&c| c != e && geo.get(c, e).is_some_and(|d| d <= 2) && quantize(share[c]) > 0.0)
        .map(|c| Mediator {
            person: PersonId(c as u32),
            pseudonym: g.nodes()[c].label.clone(),
            share: quantize(share[c]),
            betweenness: quantize(between[c]),
        })
        .collect();
    out.sort_by(|a, b| {
        b.share
            .total_cmp(&a.share)
            .then(b.betweenness.total_cmp(&a.betweenness))
            .then(a.person.cmp(&b.person))
    });
    Ok(out)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::graph::{Attributes, SocialGraph};
    use crate::network::{derive_tie_levels, Networks};
    use crate::survey::{score_audit, Gender, PersonId, PersonProfile};

    /// Networks from directed friendship weights and consumption arcs.
    pub fn networks(n: usize, friendship: &[(usize, usize, u8)], consumption: &[(usize, usize)]) -> Networks {
        let labels: Vec<String> = (0..n).map(|i| format!("P{i}")).collect();
        let mut f = SocialGraph::new("friendship", true, true);
        let mut c = SocialGraph::new("consumption", true, false);
        for l in &labels {
            f.add_node(l, Attributes::new()).unwrap();
            c.add_node(l, Attributes::new()).unwrap();
        }
        for &(u, v, w) in friendship {
            f.add_tie(u, v, Some(w)).unwrap();
        }
        for &(u, v) in consumption {
            c.add_tie(u, v, None).unwrap();
        }
        let levels = derive_tie_levels(&f).unwrap();
        Networks {
            friendship: f,
            acquaintances: levels.acquaintances,
            partners: levels.partners,
            friends: levels.friends,
            consumption: c,
        }
    }

    /// Profiles with the given AUDIT totals (`None` = no result).
    pub fn profiles(scores: &[Option<i64>], genders: &[Gender]) -> Vec<PersonProfile> {
        scores
            .iter()
            .enumerate()
            .map(|(i, s)| PersonProfile {
                person: PersonId(i as u32),
                pseudonym: format!("P{i}"),
                age: Some(15),
                gender: genders.get(i).copied().unwrap_or_default(),
                class: "1A".into(),
                place_of_birth: None,
                friends_outside: None,
                drinking_mates_outside: None,
                family_drinking_frequency: None,
                audit: s.map(|total| {
                    let mut items = [0i64; 10];
                    let mut left = total;
                    for item in items.iter_mut() {
                        *item = left.min(4);
                        left -= *item;
                    }
                    score_audit(&items).unwrap()
                }),
                fas: None,
                kidscreen: None,
                self_efficacy: None,
                estudes: Default::default(),
                habits: Default::default(),
                flags: vec![],
            })
            .collect()
    }
}
