use alloc::string::String;
use alloc::vec::Vec;

use super::{DatasetError, Illumination, PersonId, SampleKey, Sensor};

/// Extent of a complete capture grid: every person has every session, sensor,
/// illumination and sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridShape {
    pub persons: u32,
    pub sessions: u8,
    pub samples: u8,
}

impl GridShape {
    /// The 41-person database: 41 x 4 x 3 x 3 x 5 = 7380 captures.
    pub const DATABASE: GridShape = GridShape { persons: 41, sessions: 4, samples: 5 };

    /// Smallest grid covering every key.
    pub fn covering<'a>(keys: impl IntoIterator<Item = &'a SampleKey>) -> GridShape {
        keys.into_iter().fold(GridShape { persons: 0, sessions: 0, samples: 0 }, |g, k| GridShape {
            persons: g.persons.max(k.person().0),
            sessions: g.sessions.max(k.session()),
            samples: g.samples.max(k.sample()),
        })
    }

    pub fn len(&self) -> usize {
        self.persons as usize * self.sessions as usize * 9 * self.samples as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every key of the grid in code order.
    pub fn keys(&self) -> impl Iterator<Item = SampleKey> + '_ {
        let mut sensors = Sensor::ALL;
        sensors.sort_by_key(|s| s.letter());
        let mut illums = Illumination::ALL;
        illums.sort_by_key(|i| i.code());
        (1..=self.persons).flat_map(move |p| {
            (1..=self.sessions).flat_map(move |s| {
                sensors.into_iter().flat_map(move |sensor| {
                    illums.into_iter().flat_map(move |il| {
                        (1..=self.samples).filter_map(move |n| SampleKey::new(p, s, sensor, il, n).ok())
                    })
                })
            })
        })
    }
}

/// Files found for a dataset, sorted by code, plus the keys missing relative
/// to the expected grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<(SampleKey, String)>,
    grid: GridShape,
    missing: Vec<SampleKey>,
}

impl Catalog {
    /// Builds a catalog from `(key, path)` pairs in any order.
    pub fn from_entries(mut entries: Vec<(SampleKey, String)>, grid: GridShape) -> Result<Self, DatasetError> {
        // Sorting by (key, path) makes the duplicate report independent of input order.
        entries.sort();
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(DatasetError::DuplicateKey {
                code: w[0].0.code(),
                first: w[0].1.clone(),
                second: w[1].1.clone(),
            });
        }
        let missing = grid.keys().filter(|k| entries.binary_search_by(|(e, _)| e.cmp(k)).is_err()).collect();
        Ok(Catalog { entries, grid, missing })
    }

    pub fn entries(&self) -> &[(SampleKey, String)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn grid(&self) -> GridShape {
        self.grid
    }

    pub fn person_count(&self) -> u32 {
        self.grid.persons
    }

    pub fn missing(&self) -> &[SampleKey] {
        &self.missing
    }

    pub fn is_complete(&self) -> bool {
        self.missing.is_empty()
    }

    pub fn contains(&self, key: &SampleKey) -> bool {
        self.path(key).is_some()
    }

    pub fn path(&self, key: &SampleKey) -> Option<&str> {
        self.entries.binary_search_by(|(e, _)| e.cmp(key)).ok().map(|i| self.entries[i].1.as_str())
    }

    /// Distinct persons with at least one file, ascending.
    pub fn persons(&self) -> Vec<PersonId> {
        let mut p: Vec<PersonId> = self.entries.iter().map(|(k, _)| k.person()).collect();
        p.dedup();
        p
    }
}
