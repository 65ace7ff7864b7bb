use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{join, match_pattern, Assertion, Binding, EntityId, EntityKind, Literal, Object, Pattern, Predicate, Store, StoreError, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

/// Built-in comparison between two bound terms. Numbers compare by value,
/// everything else by the total order on objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Guard {
    pub left: Term,
    pub op: Cmp,
    pub right: Term,
}

impl Guard {
    fn holds(&self, b: &Binding) -> bool {
        let value = |t: &Term| match t {
            Term::Var(v) => b.get(v).cloned(),
            Term::Value(o) => Some(o.clone()),
        };
        let (Some(l), Some(r)) = (value(&self.left), value(&self.right)) else {
            return false;
        };
        let numeric = |o: &Object| o.as_literal().and_then(Literal::as_f64);
        let ord = match (numeric(&l), numeric(&r)) {
            (Some(a), Some(b)) => a.total_cmp(&b),
            _ => l.cmp(&r),
        };
        use std::cmp::Ordering::*;
        match self.op {
            Cmp::Lt => ord == Less,
            Cmp::Le => ord != Greater,
            Cmp::Eq => ord == Equal,
            Cmp::Ne => ord != Equal,
            Cmp::Ge => ord != Less,
            Cmp::Gt => ord == Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadTemplate {
    /// Binds `var` to the entity `prefix/key1/key2/...`, creating it with
    /// `kind` when absent. The same key always yields the same id.
    Mint {
        var: String,
        kind: EntityKind,
        prefix: String,
        key: Vec<Term>,
    },
    Assert(Pattern),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub name: String,
    pub body: Vec<Pattern>,
    #[serde(default)]
    pub guards: Vec<Guard>,
    pub head: Vec<HeadTemplate>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("rule {rule}: variable ?{var} is not bound by the body")]
    Unsafe { rule: String, var: String },
    #[error("rule {rule}: minted variable ?{var} is already bound")]
    MintRebinds { rule: String, var: String },
    #[error("rule {0}: empty body")]
    EmptyBody(String),
    #[error("rule {rule}: {source}")]
    Store {
        rule: String,
        #[source]
        source: StoreError,
    },
}

impl Rule {
    /// Every variable used in guards, mint keys or head patterns must be bound
    /// by the body (or an earlier mint).
    pub fn check_safety(&self) -> Result<(), RuleError> {
        if self.body.is_empty() {
            return Err(RuleError::EmptyBody(self.name.clone()));
        }
        let mut bound: BTreeSet<&str> = self.body.iter().flat_map(Pattern::vars).collect();
        let need = |bound: &BTreeSet<&str>, t: &Term| match t {
            Term::Var(v) if !bound.contains(v.as_str()) => Err(RuleError::Unsafe {
                rule: self.name.clone(),
                var: v.clone(),
            }),
            _ => Ok(()),
        };
        for g in &self.guards {
            need(&bound, &g.left)?;
            need(&bound, &g.right)?;
        }
        for h in &self.head {
            match h {
                HeadTemplate::Mint { var, key, .. } => {
                    for t in key {
                        need(&bound, t)?;
                    }
                    if !bound.insert(var.as_str()) {
                        return Err(RuleError::MintRebinds {
                            rule: self.name.clone(),
                            var: var.clone(),
                        });
                    }
                }
                HeadTemplate::Assert(p) => {
                    need(&bound, &p.subject)?;
                    need(&bound, &p.object)?;
                }
            }
        }
        Ok(())
    }

    /// Whether the body and guards are satisfied by `b` in `store`.
    pub fn body_holds(&self, store: &Store, b: &Binding) -> bool {
        let mut found = false;
        join(store, &self.body, &mut vec![false; self.body.len()], b.clone(), &mut |nb| {
            if self.guards.iter().all(|g| g.holds(&nb)) {
                found = true;
            }
        });
        found
    }

    fn instantiate(&self, b: &Binding) -> (Binding, Vec<(EntityId, EntityKind)>, Vec<Assertion>) {
        let mut b = b.clone();
        let mut minted = Vec::new();
        let mut out = Vec::new();
        let resolve = |b: &Binding, t: &Term| match t {
            Term::Var(v) => b[v].clone(),
            Term::Value(o) => o.clone(),
        };
        for h in &self.head {
            match h {
                HeadTemplate::Mint { var, kind, prefix, key } => {
                    let mut id = prefix.clone();
                    for t in key {
                        id.push('/');
                        match resolve(&b, t) {
                            Object::Entity(e) => id.push_str(e.as_str()),
                            Object::Literal(l) => id.push_str(&l.to_string()),
                        }
                    }
                    let id = EntityId(id);
                    minted.push((id.clone(), *kind));
                    b.insert(var.clone(), Object::Entity(id));
                }
                HeadTemplate::Assert(p) => {
                    let Object::Entity(subject) = resolve(&b, &p.subject) else {
                        continue;
                    };
                    out.push(Assertion {
                        subject,
                        predicate: p.predicate,
                        object: resolve(&b, &p.object),
                    });
                }
            }
        }
        (b, minted, out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub rule: String,
    pub assertion: Assertion,
    /// Variable bindings of the firing, including minted entities.
    pub binding: Binding,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DerivationReport {
    pub derived: Vec<Derivation>,
    pub minted: Vec<(EntityId, EntityKind)>,
    pub rounds: usize,
}

impl DerivationReport {
    pub fn is_empty(&self) -> bool {
        self.derived.is_empty() && self.minted.is_empty()
    }
}

/// Semi-naive forward chaining to a fixpoint. Each round only considers
/// bindings that use at least one assertion derived in the previous round
/// (the first round treats the whole store as new).
pub fn run_rules(store: &mut Store, rules: &[Rule]) -> Result<DerivationReport, RuleError> {
    for r in rules {
        r.check_safety()?;
    }
    let mut report = DerivationReport::default();
    // `None` stands for the whole store in the first round.
    let mut delta: Option<Store> = None;
    loop {
        report.rounds += 1;
        let mut firings: Vec<(usize, Binding)> = Vec::new();
        for (ri, rule) in rules.iter().enumerate() {
            let mut keep = |full: Binding| {
                if rule.guards.iter().all(|g| g.holds(&full)) {
                    firings.push((ri, full));
                }
            };
            match &delta {
                None => join(store, &rule.body, &mut vec![false; rule.body.len()], Binding::new(), &mut keep),
                Some(delta) => {
                    for i in 0..rule.body.len() {
                        let mut used = vec![false; rule.body.len()];
                        used[i] = true;
                        match_pattern(delta, &rule.body[i], &Binding::new(), |b| {
                            join(store, &rule.body, &mut used.clone(), b, &mut keep)
                        });
                    }
                }
            }
        }
        firings.sort();
        firings.dedup();

        let mut next = Store::new();
        for (ri, b) in firings {
            let rule = &rules[ri];
            let (binding, minted, assertions) = rule.instantiate(&b);
            for (id, kind) in minted {
                if store.kind_of(&id).is_none() {
                    report.minted.push((id.clone(), kind));
                }
                store.add_entity(id, kind).map_err(|source| RuleError::Store {
                    rule: rule.name.clone(),
                    source,
                })?;
            }
            for a in assertions {
                let fresh = store.assert_fact(a.clone()).map_err(|source| RuleError::Store {
                    rule: rule.name.clone(),
                    source,
                })?;
                if fresh {
                    next.insert_raw(a.clone());
                    report.derived.push(Derivation {
                        rule: rule.name.clone(),
                        assertion: a,
                        binding: binding.clone(),
                    });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        delta = Some(next);
    }
    Ok(report)
}

impl Store {
    /// Inserts without vocabulary or reference checks (delta sets only).
    fn insert_raw(&mut self, a: Assertion) {
        if self
            .forward
            .entry(a.predicate)
            .or_default()
            .entry(a.subject.clone())
            .or_default()
            .insert(a.object.clone())
        {
            self.backward
                .entry(a.predicate)
                .or_default()
                .entry(a.object)
                .or_default()
                .insert(a.subject);
            self.len += 1;
        }
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn pat(s: &str, p: Predicate, o: Term) -> Pattern {
    Pattern::new(v(s), p, o)
}

fn assert(s: &str, p: Predicate, o: Term) -> HeadTemplate {
    HeadTemplate::Assert(pat(s, p, o))
}

/// The seven rule behaviors of the knowledge base.
pub fn standard_rules() -> Vec<Rule> {
    use Predicate::*;
    vec![
        Rule {
            name: "link_person_network_event".into(),
            body: vec![
                pat("p", AnsweredAt, v("ev")),
                pat("ev", OfQuestionnaire, v("q")),
                pat("q", GeneratesNetwork, v("net")),
            ],
            guards: vec![],
            head: vec![assert("p", MemberOfNetwork, v("net"))],
        },
        Rule {
            name: "create_relationships".into(),
            body: vec![
                pat("p", Answered, v("a")),
                pat("a", ToQuestion, v("q")),
                pat("q", GeneratesNetwork, v("net")),
                pat("q", TieThreshold, v("th")),
                pat("a", AboutPerson, v("t")),
                pat("a", AnswerValue, v("w")),
            ],
            guards: vec![Guard {
                left: v("w"),
                op: Cmp::Ge,
                right: v("th"),
            }],
            head: vec![
                HeadTemplate::Mint {
                    var: "r".into(),
                    kind: EntityKind::Relationship,
                    prefix: "relationship".into(),
                    key: vec![v("net"), v("p"), v("t")],
                },
                assert("r", RelationshipFrom, v("p")),
                assert("r", RelationshipTo, v("t")),
                assert("r", RelationshipIn, v("net")),
                assert("r", RelationshipWeight, v("w")),
            ],
        },
        Rule {
            name: "assign_characteristic".into(),
            body: vec![
                pat("c", CharacteristicOf, v("p")),
                pat("c", CharacteristicIn, v("net")),
                pat("p", MemberOfNetwork, v("net")),
            ],
            guards: vec![],
            head: vec![assert("p", HasCharacteristic, v("c"))],
        },
        Rule {
            name: "create_characteristics".into(),
            body: vec![pat("r", RelationshipFrom, v("p")), pat("r", RelationshipIn, v("net"))],
            guards: vec![],
            head: vec![
                HeadTemplate::Mint {
                    var: "c".into(),
                    kind: EntityKind::SNACharacteristic,
                    prefix: "characteristic".into(),
                    key: vec![v("net"), v("p")],
                },
                assert("c", CharacteristicOf, v("p")),
                assert("c", CharacteristicIn, v("net")),
                assert("c", CharacteristicType, Term::lit(Literal::Str("declares_ties".into()))),
            ],
        },
        Rule {
            name: "answer_evidences_characteristic".into(),
            body: vec![
                pat("c", CharacteristicOf, v("p")),
                pat("c", CharacteristicIn, v("net")),
                pat("p", Answered, v("a")),
                pat("a", ToQuestion, v("q")),
                pat("q", GeneratesNetwork, v("net")),
                pat("q", TieThreshold, v("th")),
                pat("a", AnswerValue, v("w")),
            ],
            guards: vec![Guard {
                left: v("w"),
                op: Cmp::Ge,
                right: v("th"),
            }],
            head: vec![assert("c", EvidencedBy, v("a"))],
        },
        Rule {
            name: "person_concepts".into(),
            body: vec![
                pat("sc", ConceptOfPerson, v("p")),
                pat("sc", ConceptInNetwork, v("net")),
                pat("p", MemberOfNetwork, v("net")),
            ],
            guards: vec![],
            head: vec![assert("p", HasSNAConcept, v("sc"))],
        },
        Rule {
            name: "network_concepts".into(),
            body: vec![pat("sc", ConceptOfNetwork, v("net"))],
            guards: vec![],
            head: vec![assert("net", HasSNAConcept, v("sc"))],
        },
    ]
}
