//! Named forms of the expression language, with golden JSON copies.

use crate::exterior::{ExactForm, KForm};
use crate::named;
use crate::scalar::{rational_to_string, Scalar};

pub struct Entry {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ExactForm,
}

impl Entry {
    pub fn exact(&self) -> ExactForm {
        (self.build)()
    }

    /// The form over the requested scalars.
    pub fn form<S: Scalar>(&self) -> KForm<S> {
        self.exact().map_coeffs(|_, c| S::parse_literal(&rational_to_string(c)).expect("rational literal"))
    }

    pub fn golden_file(&self) -> String {
        format!("{}.json", self.name)
    }

    /// Text of the golden file: pretty JSON with a trailing newline.
    pub fn golden_text(&self) -> String {
        format!("{}\n", self.exact().to_json_pretty())
    }
}

fn h(i: usize) -> ExactForm {
    named::cartan_basis().swap_remove(i)
}

static ENTRIES: [Entry; 14] = [
    Entry { name: "omega_i", description: "Kähler form of the complex structure i on H^2", build: named::omega_i },
    Entry { name: "omega_j", description: "Kähler form of the complex structure j on H^2", build: named::omega_j },
    Entry { name: "omega_k", description: "Kähler form of the complex structure k on H^2", build: named::omega_k },
    Entry { name: "kraines2", description: "Kraines form (omega_i^2 + omega_j^2 + omega_k^2)/6, unit comass", build: named::kraines2 },
    Entry { name: "cayley", description: "Cayley form, self-dual with unit comass and norm^2 = 14", build: named::cayley },
    Entry { name: "kahler_sq", description: "square of the Kähler form omega_i", build: named::kahler_sq },
    Entry { name: "h1", description: "Cartan basis element e1234", build: || h(0) },
    Entry { name: "h2", description: "Cartan basis element e1256", build: || h(1) },
    Entry { name: "h3", description: "Cartan basis element e1278", build: || h(2) },
    Entry { name: "h4", description: "Cartan basis element e1357", build: || h(3) },
    Entry { name: "h5", description: "Cartan basis element e1467", build: || h(4) },
    Entry { name: "h6", description: "Cartan basis element e1368", build: || h(5) },
    Entry { name: "h7", description: "Cartan basis element e1458", build: || h(6) },
    Entry { name: "vol", description: "volume form dx12345678", build: named::volume },
];

pub fn entries() -> &'static [Entry] {
    &ENTRIES
}

pub fn lookup(name: &str) -> Option<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name)
}

/// Golden files shipped with the crate, used when no directory is given.
pub fn builtin_golden(name: &str) -> Option<&'static str> {
    Some(match name {
        "omega_i" => include_str!("../../golden/omega_i.json"),
        "omega_j" => include_str!("../../golden/omega_j.json"),
        "omega_k" => include_str!("../../golden/omega_k.json"),
        "kraines2" => include_str!("../../golden/kraines2.json"),
        "cayley" => include_str!("../../golden/cayley.json"),
        "kahler_sq" => include_str!("../../golden/kahler_sq.json"),
        "h1" => include_str!("../../golden/h1.json"),
        "h2" => include_str!("../../golden/h2.json"),
        "h3" => include_str!("../../golden/h3.json"),
        "h4" => include_str!("../../golden/h4.json"),
        "h5" => include_str!("../../golden/h5.json"),
        "h6" => include_str!("../../golden/h6.json"),
        "h7" => include_str!("../../golden/h7.json"),
        "vol" => include_str!("../../golden/vol.json"),
        _ => return None,
    })
}
