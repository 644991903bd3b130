//! Key placement and the layout file format.
//!
//! Coordinates are zero-based. Row 0 is the top row. A column belongs to the
//! left hand when it lies in the left half of the board.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::partition::HandPartition;
use crate::stats::NGramTable;
use crate::{codepoint, Error, Hand, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub layer: usize,
    pub row: usize,
    pub column: usize,
}

impl Slot {
    pub fn new(layer: usize, row: usize, column: usize) -> Self {
        Self { layer, row, column }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    rows: usize,
    columns: usize,
    layers: Vec<String>,
    home_row: usize,
    left_priority: Vec<Slot>,
    right_priority: Vec<Slot>,
}

impl Default for Geometry {
    /// Three rows of ten columns on base, shift and ctrl layers.
    fn default() -> Self {
        Self::new(3, 10, vec!["base".into(), "shift".into(), "ctrl".into()], 1)
            .expect("default geometry is valid")
    }
}

impl Geometry {
    /// Geometry with the default priority: per layer, the home row then the
    /// remaining rows top to bottom, each inner column first.
    pub fn new(rows: usize, columns: usize, layers: Vec<String>, home_row: usize) -> Result<Self> {
        if rows == 0 || columns < 2 || layers.is_empty() {
            return Err(Error::Config(
                "geometry needs at least one row, two columns and one layer".into(),
            ));
        }
        if home_row >= rows {
            return Err(Error::Config(format!(
                "home row {home_row} is outside {rows} rows"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = layers.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::Config(format!("duplicate layer name {dup:?}")));
        }
        let mut g = Self {
            rows,
            columns,
            layers,
            home_row,
            left_priority: Vec::new(),
            right_priority: Vec::new(),
        };
        g.left_priority = g.default_priority(Hand::Left);
        g.right_priority = g.default_priority(Hand::Right);
        Ok(g)
    }

    fn default_priority(&self, hand: Hand) -> Vec<Slot> {
        let row_order: Vec<usize> = std::iter::once(self.home_row)
            .chain((0..self.rows).filter(|&r| r != self.home_row))
            .collect();
        let columns: Vec<usize> = match hand {
            Hand::Left => (0..self.columns)
                .filter(|&c| self.hand_of_column(c) == Hand::Left)
                .rev()
                .collect(),
            Hand::Right => (0..self.columns)
                .filter(|&c| self.hand_of_column(c) == Hand::Right)
                .collect(),
        };
        let mut out = Vec::new();
        for layer in 0..self.layers.len() {
            for &row in &row_order {
                for &column in &columns {
                    out.push(Slot::new(layer, row, column));
                }
            }
        }
        out
    }

    /// Replaces the per-hand placement order. Each list must cover every slot
    /// of its hand exactly once.
    pub fn with_priority(mut self, left: Vec<Slot>, right: Vec<Slot>) -> Result<Self> {
        for (hand, list) in [(Hand::Left, &left), (Hand::Right, &right)] {
            let mut expected = self.default_priority(hand);
            let mut given = list.clone();
            expected.sort();
            given.sort();
            if expected != given {
                return Err(Error::Config(format!(
                    "{hand} priority must list each of the {} {hand}-hand slots exactly once",
                    expected.len()
                )));
            }
        }
        self.left_priority = left;
        self.right_priority = right;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn layers(&self) -> &[String] {
        &self.layers
    }

    pub fn home_row(&self) -> usize {
        self.home_row
    }

    pub fn priority(&self, hand: Hand) -> &[Slot] {
        match hand {
            Hand::Left => &self.left_priority,
            Hand::Right => &self.right_priority,
        }
    }

    pub fn hand_of_column(&self, column: usize) -> Hand {
        if 2 * (column + 1) <= self.columns {
            Hand::Left
        } else {
            Hand::Right
        }
    }

    pub fn contains(&self, slot: Slot) -> bool {
        slot.layer < self.layers.len() && slot.row < self.rows && slot.column < self.columns
    }

    fn has_default_priority(&self) -> bool {
        self.left_priority == self.default_priority(Hand::Left)
            && self.right_priority == self.default_priority(Hand::Right)
    }

    pub fn to_file(&self) -> GeometryFile {
        let priority = (!self.has_default_priority()).then(|| PriorityFile {
            left: self.left_priority.iter().map(|s| [s.layer, s.row, s.column]).collect(),
            right: self.right_priority.iter().map(|s| [s.layer, s.row, s.column]).collect(),
        });
        GeometryFile {
            rows: self.rows,
            columns: self.columns,
            layers: self.layers.clone(),
            home_row: Some(self.home_row),
            position_priority: priority,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GeometryFile =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("geometry: {e}")))?;
        raw.try_into()
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    pub rows: usize,
    pub columns: usize,
    pub layers: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub home_row: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position_priority: Option<PriorityFile>,
}

/// Slots as `[layer, row, column]` triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorityFile {
    pub left: Vec<[usize; 3]>,
    pub right: Vec<[usize; 3]>,
}

impl TryFrom<GeometryFile> for Geometry {
    type Error = Error;

    fn try_from(raw: GeometryFile) -> Result<Self> {
        let home_row = raw.home_row.unwrap_or(raw.rows / 2);
        let g = Geometry::new(raw.rows, raw.columns, raw.layers, home_row)?;
        match raw.position_priority {
            None => Ok(g),
            Some(p) => {
                let slots = |v: Vec<[usize; 3]>| v.into_iter().map(|[l, r, c]| Slot::new(l, r, c)).collect();
                g.with_priority(slots(p.left), slots(p.right))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub hand: Hand,
    pub slot: Slot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyboardLayout {
    name: String,
    geometry: Geometry,
    assignment: BTreeMap<char, Placement>,
    by_slot: BTreeMap<Slot, char>,
}

impl KeyboardLayout {
    /// Validates slot bounds and injectivity. Hands follow from the columns.
    pub fn new(
        name: impl Into<String>,
        geometry: Geometry,
        keys: impl IntoIterator<Item = (char, Slot)>,
    ) -> Result<Self> {
        let mut layout = Self {
            name: name.into(),
            geometry,
            assignment: BTreeMap::new(),
            by_slot: BTreeMap::new(),
        };
        for (letter, slot) in keys {
            layout.insert(letter, slot)?;
        }
        Ok(layout)
    }

    fn insert(&mut self, letter: char, slot: Slot) -> Result<()> {
        if !self.geometry.contains(slot) {
            return Err(Error::InvariantViolation(format!(
                "{} placed at {slot:?}, outside the geometry",
                codepoint::format(letter)
            )));
        }
        if let Some(other) = self.by_slot.get(&slot) {
            return Err(Error::InvariantViolation(format!(
                "{} and {} share slot {slot:?}",
                codepoint::format(*other),
                codepoint::format(letter)
            )));
        }
        if self.assignment.contains_key(&letter) {
            return Err(Error::InvariantViolation(format!(
                "{} is assigned twice",
                codepoint::format(letter)
            )));
        }
        let hand = self.geometry.hand_of_column(slot.column);
        self.assignment.insert(letter, Placement { hand, slot });
        self.by_slot.insert(slot, letter);
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn placement(&self, letter: char) -> Option<Placement> {
        self.assignment.get(&letter).copied()
    }

    pub fn hand_of(&self, letter: char) -> Option<Hand> {
        self.assignment.get(&letter).map(|p| p.hand)
    }

    pub fn letter_at(&self, slot: Slot) -> Option<char> {
        self.by_slot.get(&slot).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, Placement)> + '_ {
        self.assignment.iter().map(|(&c, &p)| (c, p))
    }

    /// Letters on `hand` in that hand's priority order.
    pub fn letters_on(&self, hand: Hand) -> Vec<char> {
        self.geometry
            .priority(hand)
            .iter()
            .filter_map(|s| self.letter_at(*s))
            .collect()
    }

    /// Left-right mirror image: every key moves to the opposite column.
    pub fn mirrored(&self) -> Result<Self> {
        let g = &self.geometry;
        let flip = |s: &Slot| Slot::new(s.layer, s.row, g.columns - 1 - s.column);
        if g.columns % 2 != 0 {
            return Err(Error::Config("only even column counts can be mirrored".into()));
        }
        let geometry = g.clone().with_priority(
            g.right_priority.iter().map(flip).collect(),
            g.left_priority.iter().map(flip).collect(),
        )?;
        KeyboardLayout::new(
            format!("{} (mirrored)", self.name),
            geometry,
            self.iter().map(|(c, p)| (c, flip(&p.slot))),
        )
    }
}

/// Places each hand's letters on that hand's priority slots, most frequent
/// first. Ties go to the lower code point.
pub fn build_layout(partition: &HandPartition, mono: &NGramTable, geometry: Geometry) -> Result<KeyboardLayout> {
    build_layout_with(partition, |c| mono.count(c.encode_utf8(&mut [0; 4])), geometry)
}

pub fn build_layout_with(
    partition: &HandPartition,
    frequency: impl Fn(char) -> u64,
    geometry: Geometry,
) -> Result<KeyboardLayout> {
    let mut keys = Vec::with_capacity(partition.len());
    for hand in [Hand::Left, Hand::Right] {
        let mut letters: Vec<(char, u64)> = partition
            .side(hand)
            .iter()
            .map(|&c| (c, frequency(c)))
            .collect();
        letters.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let slots = geometry.priority(hand);
        if letters.len() > slots.len() {
            return Err(Error::CapacityExceeded {
                hand,
                overflow: letters.len() - slots.len(),
            });
        }
        keys.extend(letters.iter().zip(slots).map(|(&(c, _), &s)| (c, s)));
    }
    KeyboardLayout::new("optimized", geometry, keys)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutFile {
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    config: serde_json::Value,
    name: String,
    geometry: GeometryFile,
    keys: Vec<KeyEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KeyEntry {
    letter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    code_point: Option<String>,
    hand: Hand,
    layer: String,
    row: usize,
    column: usize,
}

pub fn serialize_layout(layout: &KeyboardLayout) -> String {
    serialize_layout_with(layout, serde_json::Value::Null)
}

/// Layout JSON with a config echo. Keys are ordered by layer, row, column.
pub fn serialize_layout_with(layout: &KeyboardLayout, config: serde_json::Value) -> String {
    let g = &layout.geometry;
    let keys = layout
        .by_slot
        .iter()
        .map(|(slot, &letter)| KeyEntry {
            letter: letter.to_string(),
            code_point: Some(codepoint::format(letter)),
            hand: g.hand_of_column(slot.column),
            layer: g.layers[slot.layer].clone(),
            row: slot.row,
            column: slot.column,
        })
        .collect();
    let file = LayoutFile {
        config,
        name: layout.name.clone(),
        geometry: g.to_file(),
        keys,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("layout serializes");
    s.push('\n');
    s
}

pub fn parse_layout(text: &str) -> Result<KeyboardLayout> {
    let file: LayoutFile = serde_json::from_str(text).map_err(|e| Error::MalformedLayout {
        reason: e.to_string(),
        line: e.line(),
        column: e.column(),
    })?;
    let geometry = Geometry::try_from(file.geometry).map_err(|e| Error::MalformedLayout {
        reason: e.to_string(),
        line: 0,
        column: 0,
    })?;
    let layer_index: HashMap<&str, usize> = geometry
        .layers()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut keys = Vec::with_capacity(file.keys.len());
    for (i, k) in file.keys.iter().enumerate() {
        let mut chars = k.letter.chars();
        let letter = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => {
                return Err(Error::InvariantViolation(format!(
                    "key {i}: letter {:?} is not a single code point",
                    k.letter
                )))
            }
        };
        if let Some(cp) = &k.code_point {
            let annotated = codepoint::parse(cp).map_err(|e| {
                Error::InvariantViolation(format!("key {i}: {e}"))
            })?;
            if annotated != letter {
                return Err(Error::InvariantViolation(format!(
                    "key {i}: code point {cp} does not match letter {:?}",
                    k.letter
                )));
            }
        }
        let layer = *layer_index.get(k.layer.as_str()).ok_or_else(|| {
            Error::InvariantViolation(format!("key {i}: unknown layer {:?}", k.layer))
        })?;
        let slot = Slot::new(layer, k.row, k.column);
        if k.column < geometry.columns() && geometry.hand_of_column(k.column) != k.hand {
            return Err(Error::InvariantViolation(format!(
                "key {i}: column {} belongs to the {} hand, file says {}",
                k.column,
                geometry.hand_of_column(k.column),
                k.hand
            )));
        }
        keys.push((letter, slot));
    }
    KeyboardLayout::new(file.name, geometry, keys)
}

pub fn load_layout(path: &std::path::Path) -> Result<KeyboardLayout> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_layout(&text)
}
