use chrono::{Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::etl::{Cell, Row, TableSource, Tables};

pub const SEX_CODES: [&str; 2] = ["C16576", "C20197"];
pub const SITE_CODES: [&str; 5] = ["C12468", "C12971", "C12439", "C12410", "C12389"];
pub const MODALITIES: [&str; 2] = ["proton", "photon"];

pub const PATIENT_COLUMNS: [&str; 4] = ["ID", "AGE", "SEX", "TUMOUR_SITE"];
pub const TREATMENT_COLUMNS: [&str; 4] = ["ID", "PATIENT_ID", "RT_START_DATE", "MODALITY"];

fn pick<'a>(rng: &mut ChaCha8Rng, values: &[&'a str]) -> &'a str {
    values[rng.random_range(0..values.len())]
}

fn table(name: &str, columns: &[&str], rows: Vec<Row>) -> TableSource {
    TableSource::new(name, columns.iter().map(|c| c.to_string()).collect(), rows)
        .expect("generated rows match the header")
}

/// Deterministic PATIENT and TREATMENT tables for `n` patients.
///
/// Identifiers embed the seed (`S7P12`, `S7T30`), so tables generated with different seeds never
/// share a patient or treatment.
pub fn generate_synthetic(n: usize, seed: u64) -> Tables {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first_day = NaiveDate::from_ymd_opt(2015, 1, 1).expect("valid date");
    let span = NaiveDate::from_ymd_opt(2024, 12, 31)
        .expect("valid date")
        .signed_duration_since(first_day)
        .num_days() as u64;

    let mut patients = Vec::with_capacity(n);
    let mut treatments = Vec::with_capacity(n * 2);
    for i in 0..n {
        let id = format!("S{seed}P{i}");
        let age = rng.random_range(18..=90u32);
        let sex = pick(&mut rng, &SEX_CODES);
        let site = pick(&mut rng, &SITE_CODES);
        for _ in 0..rng.random_range(1..=3) {
            let date = first_day + Days::new(rng.random_range(0..=span));
            let modality = pick(&mut rng, &MODALITIES);
            treatments.push(Row::new(vec![
                Cell::Text(format!("S{seed}T{}", treatments.len())),
                Cell::Text(id.clone()),
                Cell::Text(date.format("%Y-%m-%d").to_string()),
                Cell::Text(modality.to_owned()),
            ]));
        }
        patients.push(Row::new(vec![
            Cell::Text(id),
            Cell::Text(age.to_string()),
            Cell::Text(sex.to_owned()),
            Cell::Text(site.to_owned()),
        ]));
    }
    [
        table("PATIENT", &PATIENT_COLUMNS, patients),
        table("TREATMENT", &TREATMENT_COLUMNS, treatments),
    ]
    .into_iter()
    .map(|t| (t.name().to_owned(), t))
    .collect()
}
