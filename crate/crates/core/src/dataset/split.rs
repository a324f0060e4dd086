use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Catalog, DatasetError, Illumination, PersonId, SampleKey, Sensor};

/// Which captures train the gallery and which are probes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpec {
    train_sessions: Vec<u8>,
    test_session: u8,
    train_illumination: Illumination,
    test_illumination: Illumination,
    sensor: Sensor,
}

impl SplitSpec {
    pub fn new(
        train_sessions: &[u8],
        test_session: u8,
        train_illumination: Illumination,
        test_illumination: Illumination,
        sensor: Sensor,
    ) -> Result<Self, DatasetError> {
        let mut train_sessions = train_sessions.to_vec();
        train_sessions.sort_unstable();
        train_sessions.dedup();
        if train_sessions.is_empty() {
            return Err(DatasetError::NoTrainSessions);
        }
        if train_sessions.contains(&test_session) {
            return Err(DatasetError::SessionOverlap(test_session));
        }
        Ok(SplitSpec { train_sessions, test_session, train_illumination, test_illumination, sensor })
    }

    pub fn train_sessions(&self) -> &[u8] {
        &self.train_sessions
    }

    pub fn test_session(&self) -> u8 {
        self.test_session
    }

    pub fn train_illumination(&self) -> Illumination {
        self.train_illumination
    }

    pub fn test_illumination(&self) -> Illumination {
        self.test_illumination
    }

    pub fn sensor(&self) -> Sensor {
        self.sensor
    }

    /// Same sessions and illuminations on another sensor.
    pub fn with_sensor(&self, sensor: Sensor) -> SplitSpec {
        SplitSpec { sensor, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitEntry {
    pub person: PersonId,
    pub key: SampleKey,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<SplitEntry>,
    pub test: Vec<SplitEntry>,
}

impl Split {
    /// Training images per person when every person has the same count.
    pub fn gallery_size(&self) -> Option<usize> {
        let mut counts: BTreeMap<PersonId, usize> = BTreeMap::new();
        for e in &self.train {
            *counts.entry(e.person).or_default() += 1;
        }
        let mut it = counts.values();
        let first = *it.next()?;
        it.all(|&c| c == first).then_some(first)
    }

    pub fn test_truth(&self) -> Vec<PersonId> {
        self.test.iter().map(|e| e.person).collect()
    }
}

/// Selects the train and test captures of `spec`. Every person present in the
/// catalog must end up on both sides.
pub fn make_split(catalog: &Catalog, spec: &SplitSpec) -> Result<Split, DatasetError> {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (key, path) in catalog.entries() {
        if key.sensor() != spec.sensor {
            continue;
        }
        let entry = || SplitEntry { person: key.person(), key: *key, path: path.clone() };
        if spec.train_sessions.contains(&key.session()) && key.illumination() == spec.train_illumination {
            train.push(entry());
        } else if key.session() == spec.test_session && key.illumination() == spec.test_illumination {
            test.push(entry());
        }
    }
    for person in catalog.persons() {
        if !train.iter().any(|e| e.person == person) {
            return Err(DatasetError::EmptySplit { person, side: "training" });
        }
        if !test.iter().any(|e| e.person == person) {
            return Err(DatasetError::EmptySplit { person, side: "test" });
        }
    }
    Ok(Split { train, test })
}
