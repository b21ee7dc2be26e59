//! Uniform entry point over the six schedulers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{
    schedule_gang, schedule_list_variant_with, schedule_sequential_lptf, ListOrder,
    ShelfThresholds,
};
use crate::bicriteria::{schedule_bicriteria, BicriteriaParams};
use crate::error::{Error, Result};
use crate::model::{Instance, Schedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Algorithm {
    Bicriteria,
    Gang,
    SeqLptf,
    ListShelf,
    ListWlptf,
    ListSaf,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Bicriteria,
        Algorithm::Gang,
        Algorithm::SeqLptf,
        Algorithm::ListShelf,
        Algorithm::ListWlptf,
        Algorithm::ListSaf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bicriteria => "bicriteria",
            Algorithm::Gang => "gang",
            Algorithm::SeqLptf => "seq-lptf",
            Algorithm::ListShelf => "list-shelf",
            Algorithm::ListWlptf => "list-wlptf",
            Algorithm::ListSaf => "list-saf",
        }
    }

    pub fn list_order(self) -> Option<ListOrder> {
        match self {
            Algorithm::ListShelf => Some(ListOrder::ShelfOrder),
            Algorithm::ListWlptf => Some(ListOrder::WeightedLPTF),
            Algorithm::ListSaf => Some(ListOrder::SmallestAreaFirst),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm `{s}`")))
    }
}

impl TryFrom<String> for Algorithm {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> String {
        a.name().to_string()
    }
}

/// Tunables shared by all algorithms; each one reads what it needs.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AlgoParams {
    pub bicriteria: BicriteriaParams,
    pub shelf: ShelfThresholds,
}

pub fn run_algorithm(algo: Algorithm, instance: &Instance, params: &AlgoParams) -> Result<Schedule> {
    Ok(match algo {
        Algorithm::Bicriteria => schedule_bicriteria(instance, &params.bicriteria)?,
        Algorithm::Gang => schedule_gang(instance),
        Algorithm::SeqLptf => schedule_sequential_lptf(instance),
        _ => schedule_list_variant_with(
            instance,
            algo.list_order().expect("list variant"),
            params.shelf,
        ),
    })
}
