//! Standardized instrument scoring: AUDIT, FAS II and KIDSCREEN-27.
//! ESTUDES and self-efficacy items are kept raw and summed.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScoreError {
    #[error("{instrument}: expected {expected} items, got {got}")]
    WrongItemCount {
        instrument: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{instrument}: item {item} has value {value}, allowed {min}..={max}")]
    ItemOutOfRange {
        instrument: &'static str,
        item: usize,
        value: i64,
        min: i64,
        max: i64,
    },
}

fn check_items(
    instrument: &'static str,
    items: &[i64],
    ranges: &[(i64, i64)],
) -> Result<u32, ScoreError> {
    if items.len() != ranges.len() {
        return Err(ScoreError::WrongItemCount {
            instrument,
            expected: ranges.len(),
            got: items.len(),
        });
    }
    let mut sum = 0;
    for (i, (&value, &(min, max))) in items.iter().zip(ranges).enumerate() {
        if !(min..=max).contains(&value) {
            return Err(ScoreError::ItemOutOfRange {
                instrument,
                item: i + 1,
                value,
                min,
                max,
            });
        }
        sum += value as u32;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AuditZone {
    I,
    II,
    III,
    IV,
}

impl AuditZone {
    pub const ALL: [AuditZone; 4] = [AuditZone::I, AuditZone::II, AuditZone::III, AuditZone::IV];

    pub fn from_score(score: u32) -> AuditZone {
        match score {
            0..=7 => AuditZone::I,
            8..=15 => AuditZone::II,
            16..=19 => AuditZone::III,
            _ => AuditZone::IV,
        }
    }

    /// 1 for zone I through 4 for zone IV.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn roman(self) -> &'static str {
        match self {
            AuditZone::I => "I",
            AuditZone::II => "II",
            AuditZone::III => "III",
            AuditZone::IV => "IV",
        }
    }

    pub fn parse(s: &str) -> Option<AuditZone> {
        AuditZone::ALL.into_iter().find(|z| z.roman() == s)
    }

    pub fn intervention(self) -> &'static str {
        match self {
            AuditZone::I => "Alcohol education.",
            AuditZone::II => "Simple advice.",
            AuditZone::III => "Simple advice plus brief counseling and continued monitoring.",
            AuditZone::IV => "Referral to a specialist for diagnostic evaluation and treatment.",
        }
    }
}

impl fmt::Display for AuditZone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditResult {
    pub score: u32,
    pub zone: AuditZone,
    pub intervention: String,
}

pub const AUDIT_ITEMS: usize = 10;

/// Ten items, each 0..=4; total 0..=40 mapped to zones I–IV.
pub fn score_audit(items: &[i64]) -> Result<AuditResult, ScoreError> {
    let score = check_items("AUDIT", items, &[(0, 4); AUDIT_ITEMS])?;
    let zone = AuditZone::from_score(score);
    Ok(AuditResult {
        score,
        zone,
        intervention: zone.intervention().to_owned(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FasBand {
    Low,
    MediumLow,
    High,
}

impl FasBand {
    pub fn from_score(score: u32) -> FasBand {
        match score {
            0..=2 => FasBand::Low,
            3..=5 => FasBand::MediumLow,
            _ => FasBand::High,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FasBand::Low => "low",
            FasBand::MediumLow => "medium_low",
            FasBand::High => "high",
        }
    }

    /// Two-level reporting scale: low and medium-low collapse together.
    pub fn reported(self) -> &'static str {
        match self {
            FasBand::Low | FasBand::MediumLow => "medium–low",
            FasBand::High => "high",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FasResult {
    pub score: u32,
    pub band: FasBand,
}

/// Family car, own bedroom, holidays, computers.
pub const FAS_RANGES: [(i64, i64); 4] = [(0, 2), (0, 1), (0, 3), (0, 3)];

pub fn score_fas(items: &[i64]) -> Result<FasResult, ScoreError> {
    let score = check_items("FAS II", items, &FAS_RANGES)?;
    Ok(FasResult {
        score,
        band: FasBand::from_score(score),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KidscreenScale {
    PhysicalWellBeing,
    PsychologicalWellBeing,
    AutonomyAndParents,
    PeersAndSocialSupport,
    SchoolEnvironment,
}

impl KidscreenScale {
    pub const ALL: [KidscreenScale; 5] = [
        KidscreenScale::PhysicalWellBeing,
        KidscreenScale::PsychologicalWellBeing,
        KidscreenScale::AutonomyAndParents,
        KidscreenScale::PeersAndSocialSupport,
        KidscreenScale::SchoolEnvironment,
    ];

    /// Items per scale, in questionnaire order.
    pub fn item_count(self) -> usize {
        match self {
            KidscreenScale::PhysicalWellBeing => 5,
            KidscreenScale::PsychologicalWellBeing => 7,
            KidscreenScale::AutonomyAndParents => 7,
            KidscreenScale::PeersAndSocialSupport => 4,
            KidscreenScale::SchoolEnvironment => 4,
        }
    }

    /// Scale of 1-based item `item` (1..=27).
    pub fn of_item(item: usize) -> Option<KidscreenScale> {
        let mut upper = 0;
        for scale in KidscreenScale::ALL {
            upper += scale.item_count();
            if (1..=upper).contains(&item) {
                return Some(scale);
            }
        }
        None
    }

    pub fn label(self) -> &'static str {
        match self {
            KidscreenScale::PhysicalWellBeing => "physical well-being",
            KidscreenScale::PsychologicalWellBeing => "psychological well-being",
            KidscreenScale::AutonomyAndParents => "autonomy and parent relations",
            KidscreenScale::PeersAndSocialSupport => "peers and social support",
            KidscreenScale::SchoolEnvironment => "school environment",
        }
    }
}

pub const KIDSCREEN_ITEMS: usize = 27;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KidscreenResult {
    pub scales: Vec<(KidscreenScale, u32)>,
    pub total: u32,
}

impl KidscreenResult {
    pub fn scale(&self, scale: KidscreenScale) -> u32 {
        self.scales
            .iter()
            .find(|(s, _)| *s == scale)
            .map(|(_, v)| *v)
            .unwrap_or(0)
    }
}

/// 27 Likert items (1..=5), raw sums per scale.
pub fn score_kidscreen(items: &[i64]) -> Result<KidscreenResult, ScoreError> {
    let total = check_items("KIDSCREEN-27", items, &[(1, 5); KIDSCREEN_ITEMS])?;
    let mut scales = Vec::with_capacity(5);
    let mut offset = 0;
    for scale in KidscreenScale::ALL {
        let n = scale.item_count();
        let sum = items[offset..offset + n].iter().sum::<i64>() as u32;
        scales.push((scale, sum));
        offset += n;
    }
    Ok(KidscreenResult { scales, total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn audit_zone_examples() {
        let r = score_audit(&[2, 2, 1, 1, 1, 1, 1, 1, 0, 0]).unwrap();
        assert_eq!((r.score, r.zone), (10, AuditZone::II));
        let r = score_audit(&[0; 10]).unwrap();
        assert_eq!((r.score, r.zone), (0, AuditZone::I));
        assert_eq!(r.intervention, "Alcohol education.");
        assert_eq!(score_audit(&[4, 4, 4, 4, 0, 0, 0, 0, 0, 0]).unwrap().zone, AuditZone::III);
        assert_eq!(score_audit(&[4, 4, 4, 4, 4, 0, 0, 0, 0, 0]).unwrap().zone, AuditZone::IV);
    }

    #[test]
    fn audit_boundaries_exhaustive() {
        let mut jumps = Vec::new();
        for s in 1..=40 {
            if AuditZone::from_score(s) != AuditZone::from_score(s - 1) {
                jumps.push(s);
            }
        }
        assert_eq!(jumps, vec![8, 16, 20]);
    }

    #[test]
    fn audit_validation() {
        assert!(matches!(
            score_audit(&[0; 9]),
            Err(ScoreError::WrongItemCount { expected: 10, got: 9, .. })
        ));
        assert!(matches!(
            score_audit(&[0, 0, 5, 0, 0, 0, 0, 0, 0, 0]),
            Err(ScoreError::ItemOutOfRange { item: 3, value: 5, .. })
        ));
    }

    #[test]
    fn fas_bands() {
        assert_eq!(score_fas(&[0, 0, 0, 0]).unwrap().band, FasBand::Low);
        assert_eq!(score_fas(&[2, 1, 3, 3]).unwrap().band, FasBand::High);
        assert_eq!(score_fas(&[1, 1, 1, 1]).unwrap().band, FasBand::MediumLow);
        let bands: Vec<FasBand> = (0..=9).map(FasBand::from_score).collect();
        assert!(bands.windows(2).all(|w| w[0] <= w[1]));
        assert!(score_fas(&[3, 0, 0, 0]).is_err());
        assert_eq!(FasBand::Low.reported(), FasBand::MediumLow.reported());
    }

    #[test]
    fn kidscreen_sums() {
        let r = score_kidscreen(&[1; 27]).unwrap();
        assert_eq!(r.total, 27);
        for scale in KidscreenScale::ALL {
            assert_eq!(r.scale(scale), scale.item_count() as u32);
        }
        assert_eq!(score_kidscreen(&[5; 27]).unwrap().total, 135);
        assert_eq!(KidscreenScale::ALL.iter().map(|s| s.item_count()).sum::<usize>(), 27);
        assert_eq!(KidscreenScale::of_item(27), Some(KidscreenScale::SchoolEnvironment));
        assert_eq!(KidscreenScale::of_item(28), None);
        assert!(score_kidscreen(&[0; 27]).is_err());
    }
}
