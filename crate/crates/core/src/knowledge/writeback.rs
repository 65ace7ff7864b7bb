use std::collections::BTreeMap;

use thiserror::Error;

use super::{Assertion, EntityId, EntityKind, Literal, Object, Predicate, Store, StoreError};
use crate::graph::{NodeId, SocialGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WriteBackError {
    #[error("graph {0:?} has not been annotated")]
    NotAnnotated(String),
    #[error("node {id} ({label:?}) has no person entity")]
    MissingPerson { id: NodeId, label: String },
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// `concept/<owner>/<metric>`, where the owner is `<person>/<network>` for
/// node metrics and `<network>` for graph metrics.
pub fn concept_id(person: Option<&EntityId>, network: &EntityId, metric: &str) -> EntityId {
    match person {
        Some(p) => EntityId(format!("concept/{p}/{network}/{metric}")),
        None => EntityId(format!("concept/{network}/{metric}")),
    }
}

fn put_concept(store: &mut Store, id: EntityId, metric: &str, value: f64, links: &[(Predicate, &EntityId)]) -> Result<(), StoreError> {
    store.add_entity(id.clone(), EntityKind::SNAConcept)?;
    for (p, target) in links {
        store.assert_fact(Assertion::new(&id, *p, Object::Entity((*target).clone())))?;
    }
    store.assert_fact(Assertion::new(&id, Predicate::Metric, Literal::Str(metric.to_owned())))?;
    let old: Vec<Object> = store.objects(&id, Predicate::MetricValue).cloned().collect();
    for o in old {
        store.retract(&Assertion::new(&id, Predicate::MetricValue, o));
    }
    store.assert_fact(Assertion::new(&id, Predicate::MetricValue, Literal::Real(value)))?;
    Ok(())
}

/// Stores every annotation of `g` as an SNAConcept. Ids are keyed by
/// (person, network, metric), so repeating the write-back replaces values
/// and never adds entities. Returns the number of concepts written.
pub fn write_back_metrics(
    store: &mut Store,
    g: &SocialGraph,
    persons: &BTreeMap<NodeId, EntityId>,
    network: &EntityId,
) -> Result<usize, WriteBackError> {
    if g.annotations().is_empty() {
        return Err(WriteBackError::NotAnnotated(g.name().to_owned()));
    }
    for node in g.nodes() {
        if !persons.contains_key(&node.id) {
            return Err(WriteBackError::MissingPerson {
                id: node.id,
                label: node.label.clone(),
            });
        }
    }
    if store.kind_of(network) != Some(EntityKind::Network) {
        return Err(StoreError::UnknownEntity(network.clone()).into());
    }
    let mut written = 0;
    for node in g.nodes() {
        let person = &persons[&node.id];
        for (metric, value) in &node.annotations {
            let id = concept_id(Some(person), network, metric.as_str());
            put_concept(
                store,
                id,
                metric.as_str(),
                *value,
                &[(Predicate::ConceptOfPerson, person), (Predicate::ConceptInNetwork, network)],
            )?;
            written += 1;
        }
    }
    for (metric, value) in g.annotations() {
        let id = concept_id(None, network, metric.as_str());
        put_concept(store, id, metric.as_str(), *value, &[(Predicate::ConceptOfNetwork, network)])?;
        written += 1;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{cyc3, line4};
    use crate::metrics::annotate;
    use crate::vocabulary::{GraphMetric, NodeMetric};

    fn store_for(g: &SocialGraph) -> (Store, BTreeMap<NodeId, EntityId>, EntityId) {
        let mut s = Store::new();
        let net = s.add_entity("network/test", EntityKind::Network).unwrap();
        let persons = g
            .nodes()
            .iter()
            .map(|n| (n.id, s.add_entity(format!("person/{}", n.label), EntityKind::Person).unwrap()))
            .collect();
        (s, persons, net)
    }

    #[test]
    fn counts_and_idempotence() {
        let g = annotate(&cyc3());
        let (mut s, persons, net) = store_for(&g);
        let written = write_back_metrics(&mut s, &g, &persons, &net).unwrap();
        let n = g.node_count();
        assert_eq!(written, n * NodeMetric::ALL.len() + GraphMetric::ALL.len());
        assert_eq!(s.entities_of(EntityKind::SNAConcept).count(), 27);
        let facts = s.len();
        write_back_metrics(&mut s, &g, &persons, &net).unwrap();
        assert_eq!(s.entities_of(EntityKind::SNAConcept).count(), 27);
        assert_eq!(s.len(), facts);
    }

    #[test]
    fn value_reads_back() {
        let g = annotate(&line4());
        let (mut s, persons, net) = store_for(&g);
        write_back_metrics(&mut s, &g, &persons, &net).unwrap();
        let id = concept_id(Some(&persons[&1]), &net, "betweenness");
        assert_eq!(s.object(&id, Predicate::MetricValue), Some(&Object::Literal(Literal::Real(2.0))));
    }

    #[test]
    fn errors() {
        let g = line4();
        let (mut s, mut persons, net) = store_for(&g);
        assert!(matches!(
            write_back_metrics(&mut s, &g, &persons, &net),
            Err(WriteBackError::NotAnnotated(_))
        ));
        let g = annotate(&g);
        persons.remove(&2);
        assert!(matches!(
            write_back_metrics(&mut s, &g, &persons, &net),
            Err(WriteBackError::MissingPerson { id: 2, .. })
        ));
    }
}
