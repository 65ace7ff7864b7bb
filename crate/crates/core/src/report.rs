//! Narrative report paragraphs.
//!
//! Sentences come from a [`Templates`] table with `{placeholder}` slots, so a
//! study can swap in its own wording. Counts pick singular or plural nouns.
//! Frequencies and amounts are spelled out, so the only digits in a report
//! are the age, the friend counts and the age at first drink.

use serde::{Deserialize, Serialize};

use crate::graph::NodeId;
use crate::network::Networks;
use crate::profile::{find_influencers, Level, ProfileError, SocialProfile};
use crate::survey::{AuditZone, Gender, PersonProfile};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportText {
    pub friendship_paragraph: String,
    pub consumption_paragraph: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Templates {
    pub age: String,
    pub popularity_majority: String,
    pub popularity_plain: String,
    pub declares: String,
    pub consumption_level: String,
    pub no_audit: String,
    pub friends_comparison: String,
    pub influence_joined: String,
    pub influence_alone: String,
    pub habits_intro: String,
    pub first_drink: String,
    pub frequency_and_amount: String,
    pub frequency_only: String,
    pub abstains: String,
    pub usual_place: String,
    /// Low, Medium, High.
    pub popularity_levels: [String; 3],
    /// Zones I to IV.
    pub consumption_levels: [String; 4],
    /// Friends' levels compared with the person's: lower, similar, higher.
    pub comparisons: [String; 3],
    /// AUDIT item 1 values 1 to 4 (0 means the person does not drink).
    pub frequencies: [String; 4],
    /// AUDIT item 2 values 0 to 4.
    pub amounts: [String; 5],
    /// Usual place values 1 to 5 (0 means the person does not drink).
    pub places: [String; 5],
    pub friend_noun: [String; 2],
    pub person_noun: [String; 2],
}

fn s(x: &str) -> String {
    x.to_owned()
}

impl Default for Templates {
    fn default() -> Self {
        Templates {
            age: s("{name} is a {age} year old."),
            popularity_majority: s("{Pronoun} is {popularity} {noun} among {possessive} friends who are {majority} in their majority."),
            popularity_plain: s("{Pronoun} is {popularity} {noun}."),
            declares: s("{name} declares to have {declared} {friend_noun} and {pronoun} is considered friend by {named_by} {person_noun}."),
            consumption_level: s("{name} has a {level} level of alcohol consumption."),
            no_audit: s("No AUDIT result is available for {name}."),
            friends_comparison: s("{Possessive} most close friends have {comparison} levels of alcohol consumption"),
            influence_joined: s(" but {pronoun} may be influenced by people with {influence_level} levels."),
            influence_alone: s("{Pronoun} may be influenced by people with {influence_level} levels."),
            habits_intro: s("Alcohol consumption habits:"),
            first_drink: s("{Pronoun} was {first_drink_age} when {pronoun} tried an alcoholic drink for the first time."),
            frequency_and_amount: s("{Pronoun} declares to have alcoholic drinks {frequency}, with {amount} drinks per occasion."),
            frequency_only: s("{Pronoun} declares to have alcoholic drinks {frequency}."),
            abstains: s("{Pronoun} declares not to drink alcohol."),
            usual_place: s("The places where {pronoun} goes for a drink more frequently are {place}."),
            popularity_levels: [s("not a popular"), s("a fairly popular"), s("a very popular")],
            consumption_levels: [s("low"), s("medium"), s("high"), s("very high")],
            comparisons: [s("lower"), s("similar"), s("higher")],
            frequencies: [
                s("monthly or less"),
                s("two to four times a month"),
                s("two or three times a week"),
                s("four or more times a week"),
            ],
            amounts: [s("one or two"), s("three or four"), s("five or six"), s("seven to nine"), s("ten or more")],
            places: [s("home"), s("a friend's home"), s("street/park"), s("bar/restaurant"), s("pub/disco")],
            friend_noun: [s("friend"), s("friends")],
            person_noun: [s("person"), s("persons")],
        }
    }
}

pub fn plural(count: usize, forms: &[String; 2]) -> &str {
    if count == 1 {
        &forms[0]
    } else {
        &forms[1]
    }
}

/// Replaces every `{key}` with its value. Unknown keys stay as written.
pub fn fill(template: &str, values: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len() + 32);
    let mut rest = template;
    while let Some(start) = rest.find('{') {
        out.push_str(&rest[..start]);
        let after = &rest[start + 1..];
        match after.find('}') {
            Some(end) => {
                let key = &after[..end];
                match values.iter().find(|(k, _)| *k == key) {
                    Some((_, v)) => out.push_str(v),
                    None => {
                        out.push('{');
                        out.push_str(key);
                        out.push('}');
                    }
                }
                rest = &after[end + 1..];
            }
            None => {
                out.push_str(&rest[start..]);
                rest = "";
            }
        }
    }
    out.push_str(rest);
    out
}

fn capitalize(x: &str) -> String {
    let mut c = x.chars();
    match c.next() {
        Some(first) => first.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

struct Voice {
    pronoun: String,
    possessive: String,
    noun: &'static str,
}

fn voice(name: &str, gender: Gender) -> Voice {
    match gender {
        Gender::Female => Voice {
            pronoun: s("she"),
            possessive: s("her"),
            noun: "girl",
        },
        Gender::Male => Voice {
            pronoun: s("he"),
            possessive: s("his"),
            noun: "boy",
        },
        Gender::Unspecified => Voice {
            pronoun: name.to_owned(),
            possessive: format!("{name}'s"),
            noun: "student",
        },
    }
}

fn level_index(l: Level) -> usize {
    match l {
        Level::Low => 0,
        Level::Medium => 1,
        Level::High => 2,
    }
}

fn zone_of(profiles: &[PersonProfile], v: NodeId) -> Option<AuditZone> {
    profiles
        .iter()
        .find(|p| p.person.index() == v)
        .and_then(|p| p.audit.as_ref())
        .map(|a| a.zone)
}

pub fn render_report(
    profile: &PersonProfile,
    social: &SocialProfile,
    networks: &Networks,
    profiles: &[PersonProfile],
) -> Result<ReportText, ProfileError> {
    render_report_with(&Templates::default(), profile, social, networks, profiles)
}

pub fn render_report_with(
    t: &Templates,
    profile: &PersonProfile,
    social: &SocialProfile,
    networks: &Networks,
    profiles: &[PersonProfile],
) -> Result<ReportText, ProfileError> {
    let me = profile.person.index();
    if me >= networks.node_count() {
        return Err(ProfileError::UnknownPerson(profile.person));
    }
    let name = profile.pseudonym.as_str();
    let v = voice(name, profile.gender);
    let pronoun_cap = capitalize(&v.pronoun);
    let possessive_cap = capitalize(&v.possessive);
    let base: Vec<(&str, &str)> = vec![
        ("name", name),
        ("pronoun", &v.pronoun),
        ("Pronoun", &pronoun_cap),
        ("possessive", &v.possessive),
        ("Possessive", &possessive_cap),
        ("noun", v.noun),
    ];
    fn extend<'a>(base: &[(&'a str, &'a str)], extra: &[(&'a str, &'a str)]) -> Vec<(&'a str, &'a str)> {
        let mut all = base.to_vec();
        all.extend_from_slice(extra);
        all
    }
    macro_rules! with {
        ($extra:expr) => {
            extend(&base, $extra)
        };
    }

    // Friendship paragraph.
    let mut friendship = Vec::new();
    if let Some(age) = profile.age {
        friendship.push(fill(&t.age, &with!(&[("age", &age.to_string())])));
    }
    let naming = networks.naming();
    let mut alters: Vec<NodeId> = naming
        .ties()
        .filter_map(|tie| match (tie.src == me, tie.dst == me) {
            (true, _) => Some(tie.dst),
            (_, true) => Some(tie.src),
            _ => None,
        })
        .collect();
    alters.sort_unstable();
    alters.dedup();
    let genders: Vec<Gender> = alters
        .iter()
        .filter_map(|&a| profiles.iter().find(|p| p.person.index() == a).map(|p| p.gender))
        .collect();
    let girls = genders.iter().filter(|g| **g == Gender::Female).count();
    let boys = genders.iter().filter(|g| **g == Gender::Male).count();
    let popularity = &t.popularity_levels[level_index(social.popularity)];
    let majority = if 2 * girls > alters.len() {
        Some("girls")
    } else if 2 * boys > alters.len() {
        Some("boys")
    } else {
        None
    };
    friendship.push(match majority {
        Some(m) => fill(&t.popularity_majority, &with!(&[("popularity", popularity), ("majority", m)])),
        None => fill(&t.popularity_plain, &with!(&[("popularity", popularity)])),
    });
    let declared = social.declared_friends.to_string();
    let named_by = social.named_by.to_string();
    friendship.push(fill(
        &t.declares,
        &with!(&[
            ("declared", &declared),
            ("friend_noun", plural(social.declared_friends, &t.friend_noun)),
            ("named_by", &named_by),
            ("person_noun", plural(social.named_by, &t.person_noun)),
        ]),
    ));

    // Consumption paragraph.
    let mut consumption = Vec::new();
    let influencers = find_influencers(profile.person, networks, profiles)?;
    let influence_level = influencers.first().map(|i| t.consumption_levels[i.zone as usize].as_str());
    match &profile.audit {
        Some(audit) => {
            consumption.push(fill(
                &t.consumption_level,
                &with!(&[("level", &t.consumption_levels[audit.zone as usize])]),
            ));
            let friend_zones: Vec<f64> = (0..networks.node_count())
                .filter(|&u| networks.friends.has_tie(me.min(u), me.max(u)) && u != me)
                .filter_map(|u| zone_of(profiles, u))
                .map(|z| f64::from(z.number()))
                .collect();
            let comparison = if friend_zones.is_empty() {
                None
            } else {
                let mean = friend_zones.iter().sum::<f64>() / friend_zones.len() as f64;
                let own = f64::from(audit.zone.number());
                Some(if (mean - own).abs() < 0.5 {
                    &t.comparisons[1]
                } else if mean > own {
                    &t.comparisons[2]
                } else {
                    &t.comparisons[0]
                })
            };
            match (comparison, influence_level) {
                (Some(c), Some(l)) => consumption.push(format!(
                    "{}{}",
                    fill(&t.friends_comparison, &with!(&[("comparison", c)])),
                    fill(&t.influence_joined, &with!(&[("influence_level", l)]))
                )),
                (Some(c), None) => {
                    consumption.push(format!("{}.", fill(&t.friends_comparison, &with!(&[("comparison", c)]))))
                }
                (None, Some(l)) => consumption.push(fill(&t.influence_alone, &with!(&[("influence_level", l)]))),
                (None, None) => {}
            }
        }
        None => {
            consumption.push(fill(&t.no_audit, &base));
            if let Some(l) = influence_level {
                consumption.push(fill(&t.influence_alone, &with!(&[("influence_level", l)])));
            }
        }
    }

    let h = &profile.habits;
    let mut habits = Vec::new();
    if let Some(age) = h.first_drink_age {
        habits.push(fill(&t.first_drink, &with!(&[("first_drink_age", &age.to_string())])));
    }
    match h.frequency {
        Some(0) => habits.push(fill(&t.abstains, &base)),
        Some(f @ 1..=4) => {
            let frequency = &t.frequencies[usize::from(f) - 1];
            match h.drinks_per_occasion.and_then(|a| t.amounts.get(usize::from(a))) {
                Some(amount) => habits.push(fill(
                    &t.frequency_and_amount,
                    &with!(&[("frequency", frequency), ("amount", amount)]),
                )),
                None => habits.push(fill(&t.frequency_only, &with!(&[("frequency", frequency)]))),
            }
        }
        _ => {}
    }
    if let Some(place) = h.usual_place.filter(|p| (1..=5).contains(p)) {
        habits.push(fill(&t.usual_place, &with!(&[("place", &t.places[usize::from(place) - 1])])));
    }
    if !habits.is_empty() {
        consumption.push(format!("{} {}", t.habits_intro, habits.join(" ")));
    }

    Ok(ReportText {
        friendship_paragraph: friendship.join(" "),
        consumption_paragraph: consumption.join(" "),
    })
}
