use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default pseudonym pool.
pub const SURNAMES: [&str; 120] = [
    "Abbott", "Ayers", "Barnett", "Barron", "Bonner", "Branch", "Brennan", "Chavez", "Clayton", "Crosby",
    "Dorsey", "Ewing", "Foster", "Gay", "Glenn", "Hall", "Hernandez", "Johnson", "Acosta", "Baird",
    "Baxter", "Bishop", "Blevins", "Booth", "Bowen", "Boyle", "Bradford", "Buckley", "Burch", "Byrd",
    "Calhoun", "Cantrell", "Carver", "Chandler", "Cline", "Cochran", "Conley", "Conrad", "Crane", "Dalton",
    "Davenport", "Dawson", "Delaney", "Dillard", "Doyle", "Duffy", "Duncan", "Durham", "Eaton", "Elliott",
    "Estes", "Farley", "Finch", "Fleming", "Forbes", "Fowler", "Frost", "Fuller", "Gamble", "Garner",
    "Gentry", "Gibbs", "Goodwin", "Graves", "Griffin", "Hale", "Hammond", "Hancock", "Harding", "Hardy",
    "Hayden", "Hendrix", "Hickman", "Hobbs", "Holland", "Hopkins", "Horton", "Houston", "Hubbard", "Ingram",
    "Jarvis", "Jennings", "Keller", "Kemp", "Kirby", "Knox", "Lambert", "Lawson", "Leblanc", "Lindsey",
    "Livingston", "Lowery", "Lynch", "Maddox", "Malone", "Mann", "Marsh", "Mayer", "McCall", "Mercer",
    "Merritt", "Monroe", "Morrow", "Nash", "Noble", "Norris", "Oneal", "Osborne", "Pace", "Parsons",
    "Patton", "Pittman", "Potter", "Pruitt", "Quinn", "Ramsey", "Rowe", "Sexton", "Sloan", "Vance",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnonymizeError {
    #[error("{needed} pseudonyms needed but the pool only has {available} unused names; supply a larger pool")]
    PoolTooSmall { needed: usize, available: usize },
    #[error("row {0} has an empty name")]
    EmptyName(usize),
}

/// Real names keyed by pseudonym. Kept apart from the study bundle and never
/// served or exported.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IdentityFile {
    pub names: BTreeMap<String, String>,
}

/// One pseudonym per name, drawn without replacement from `pool` in an order
/// fixed by `seed`. Names in `taken` are skipped.
pub fn anonymize_with(
    pool: &[&str],
    names: &[&str],
    taken: &BTreeSet<String>,
    seed: u64,
) -> Result<Vec<String>, AnonymizeError> {
    if let Some(i) = names.iter().position(|n| n.trim().is_empty()) {
        return Err(AnonymizeError::EmptyName(i));
    }
    let mut free: Vec<&str> = pool.iter().copied().filter(|p| !taken.contains(*p)).collect();
    free.sort_unstable();
    free.dedup();
    if names.len() > free.len() {
        return Err(AnonymizeError::PoolTooSmall {
            needed: names.len(),
            available: free.len(),
        });
    }
    free.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(free[..names.len()].iter().map(|s| s.to_string()).collect())
}

pub fn anonymize(names: &[&str], seed: u64) -> Result<Vec<String>, AnonymizeError> {
    anonymize_with(&SURNAMES, names, &BTreeSet::new(), seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_distinct() {
        let names: Vec<String> = (0..38).map(|i| format!("Student {i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let a = anonymize(&refs, 7).unwrap();
        assert_eq!(a, anonymize(&refs, 7).unwrap());
        assert_ne!(a, anonymize(&refs, 8).unwrap());
        assert_eq!(a.iter().collect::<BTreeSet<_>>().len(), 38);
    }

    #[test]
    fn pool_limits() {
        let pool = ["Gay", "Hall"];
        let taken = BTreeSet::from(["Gay".to_string()]);
        assert_eq!(anonymize_with(&pool, &["x"], &taken, 1).unwrap(), vec!["Hall"]);
        assert_eq!(
            anonymize_with(&pool, &["x", "y"], &taken, 1),
            Err(AnonymizeError::PoolTooSmall { needed: 2, available: 1 })
        );
        assert_eq!(anonymize(&["a", " "], 1), Err(AnonymizeError::EmptyName(1)));
        assert_eq!(SURNAMES.iter().collect::<BTreeSet<_>>().len(), SURNAMES.len());
    }
}
