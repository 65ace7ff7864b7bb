use serde::{Deserialize, Serialize};

use super::{AnswerOption, ItemRole, KidscreenScale, Question, QuestionKind, Questionnaire};

/// Contact levels of the friendship question, weakest first.
pub const TIE_SCALE: [(&str, i64); 5] = [
    ("We never spend time together", 1),
    ("We sometimes spend time together", 2),
    ("We use to spend quite a lot of time together", 3),
    ("We are almost always together", 4),
    ("We are always together", 5),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FasItem {
    Car,
    Bedroom,
    Holidays,
    Computers,
}

impl FasItem {
    pub const ALL: [FasItem; 4] = [FasItem::Car, FasItem::Bedroom, FasItem::Holidays, FasItem::Computers];
}

const AUDIT_TEXTS: [(&str, &[&str]); 10] = [
    (
        "How often do you have a drink containing alcohol?",
        &["Never", "Monthly or less", "2 to 4 times a month", "2 to 3 times a week", "4 or more times a week"],
    ),
    (
        "How many drinks containing alcohol do you have on a typical day when you are drinking?",
        &["1 or 2", "3 or 4", "5 or 6", "7 to 9", "10 or more"],
    ),
    ("How often do you have six or more drinks on one occasion?", FREQUENCY),
    (
        "How often during the last year have you found that you were not able to stop drinking once you had started?",
        FREQUENCY,
    ),
    (
        "How often during the last year have you failed to do what was normally expected of you because of drinking?",
        FREQUENCY,
    ),
    (
        "How often during the last year have you needed a first drink in the morning to get yourself going after a heavy drinking session?",
        FREQUENCY,
    ),
    ("How often during the last year have you had a feeling of guilt or remorse after drinking?", FREQUENCY),
    (
        "How often during the last year have you been unable to remember what happened the night before because of your drinking?",
        FREQUENCY,
    ),
    ("Have you or someone else been injured because of your drinking?", YES_LAST_YEAR),
    (
        "Has a relative, friend, doctor, or other health worker been concerned about your drinking or suggested you cut down?",
        YES_LAST_YEAR,
    ),
];

const FREQUENCY: &[&str] = &["Never", "Less than monthly", "Monthly", "Weekly", "Daily or almost daily"];
const YES_LAST_YEAR: &[&str] = &["No", "Yes, but not in the last year", "Yes, during the last year"];

const ESTUDES_SUBSTANCES: [&str; 7] = [
    "tobacco",
    "cannabis",
    "cocaine",
    "ecstasy",
    "amphetamines",
    "hallucinogens",
    "sedatives",
];

fn options(pairs: impl IntoIterator<Item = (String, i64)>) -> Vec<AnswerOption> {
    pairs
        .into_iter()
        .map(|(label, value)| AnswerOption { label, value })
        .collect()
}

fn question(id: impl Into<String>, text: impl Into<String>, kind: QuestionKind, opts: Vec<AnswerOption>, role: ItemRole) -> Question {
    Question {
        id: id.into(),
        text: text.into(),
        repeat_over_roster: kind == QuestionKind::NetworkGenerating,
        kind,
        options: opts,
        role,
    }
}

/// The classroom battery: personal and family items, AUDIT, FAS II,
/// ESTUDES (non-alcohol substances), KIDSCREEN-27, self-efficacy and the two
/// network-generating questions.
pub fn standard_questionnaire(id: &str) -> Questionnaire {
    use QuestionKind::*;
    let mut qs = vec![
        question("place_of_birth", "Where were you born?", Text, vec![], ItemRole::PlaceOfBirth),
        question(
            "friends_outside",
            "How many friends do you have outside your school?",
            Numeric,
            vec![],
            ItemRole::FriendsOutside,
        ),
        question(
            "drinking_mates_outside",
            "With how many people from outside your school would you go out for an alcoholic drink?",
            Numeric,
            vec![],
            ItemRole::DrinkingMatesOutside,
        ),
        question(
            "family_drinking",
            "How often do you drink alcohol with members of your family?",
            Likert,
            options(
                ["Never", "Less than monthly", "Monthly", "Weekly", "Daily or almost daily"]
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.to_string(), i as i64)),
            ),
            ItemRole::FamilyDrinkingFrequency,
        ),
        question(
            "first_drink_age",
            "How old were you when you tried an alcoholic drink for the first time?",
            Numeric,
            vec![],
            ItemRole::FirstDrinkAge,
        ),
        question(
            "usual_place",
            "Where do you go for a drink most frequently?",
            Choice,
            options(
                ["I do not drink", "home", "a friend's home", "street/park", "bar/restaurant", "pub/disco"]
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.to_string(), i as i64)),
            ),
            ItemRole::UsualPlace,
        ),
    ];

    for (i, (text, labels)) in AUDIT_TEXTS.iter().enumerate() {
        // Items 9 and 10 are scored 0, 2, 4.
        let step = if labels.len() == 3 { 2 } else { 1 };
        qs.push(question(
            format!("audit_{}", i + 1),
            *text,
            Choice,
            options(labels.iter().enumerate().map(|(v, l)| (l.to_string(), (v * step) as i64))),
            ItemRole::Audit { item: i as u8 + 1 },
        ));
    }

    let fas: [(FasItem, &str, &[&str]); 4] = [
        (FasItem::Car, "Does your family own a car, van or truck?", &["No", "Yes, one", "Yes, two or more"]),
        (FasItem::Bedroom, "Do you have your own bedroom for yourself?", &["No", "Yes"]),
        (
            FasItem::Holidays,
            "During the past 12 months, how many times did you travel away on holiday with your family?",
            &["Not at all", "Once", "Twice", "More than twice"],
        ),
        (
            FasItem::Computers,
            "How many computers does your family own?",
            &["None", "One", "Two", "More than two"],
        ),
    ];
    for (item, text, labels) in fas {
        qs.push(question(
            format!("fas_{}", serde_json::to_value(item).expect("unit variant").as_str().unwrap_or("item")),
            text,
            Choice,
            options(labels.iter().enumerate().map(|(v, l)| (l.to_string(), v as i64))),
            ItemRole::Fas { item },
        ));
    }

    for substance in ESTUDES_SUBSTANCES {
        qs.push(question(
            format!("estudes_{substance}"),
            format!("On how many days in the last 30 days have you used {substance}?"),
            Likert,
            options(
                ["None", "1 to 2 days", "3 to 9 days", "10 to 19 days", "20 days or more"]
                    .iter()
                    .enumerate()
                    .map(|(v, l)| (l.to_string(), v as i64)),
            ),
            ItemRole::Estudes {
                substance: substance.to_owned(),
            },
        ));
    }

    let likert5 = || {
        options(
            ["Never", "Seldom", "Quite often", "Very often", "Always"]
                .iter()
                .enumerate()
                .map(|(v, l)| (l.to_string(), v as i64 + 1)),
        )
    };
    for item in 1..=27u8 {
        let scale = KidscreenScale::of_item(item as usize).expect("27 items");
        qs.push(question(
            format!("kidscreen_{item}"),
            format!("KIDSCREEN-27 item {item} ({})", scale.label()),
            Likert,
            likert5(),
            ItemRole::Kidscreen { item },
        ));
    }

    for item in 1..=10u8 {
        qs.push(question(
            format!("self_efficacy_{item}"),
            format!("Self-efficacy item {item}"),
            Likert,
            options(
                ["Not at all true", "Hardly true", "Moderately true", "Exactly true"]
                    .iter()
                    .enumerate()
                    .map(|(v, l)| (l.to_string(), v as i64 + 1)),
            ),
            ItemRole::SelfEfficacy { item },
        ));
    }

    qs.push(question(
        "friendship",
        "How much time do you spend with each of the following classmates?",
        NetworkGenerating,
        options(TIE_SCALE.iter().map(|(l, v)| (l.to_string(), *v))),
        ItemRole::FriendshipNetwork,
    ));
    qs.push(question(
        "consumption",
        "Would you go out for an alcoholic drink with each of the following classmates?",
        NetworkGenerating,
        options([("No".to_string(), 0), ("Yes".to_string(), 1)]),
        ItemRole::ConsumptionNetwork,
    ));

    Questionnaire {
        id: id.to_owned(),
        title: "Adolescent alcohol use and social network questionnaire".to_owned(),
        questions: qs,
    }
}
