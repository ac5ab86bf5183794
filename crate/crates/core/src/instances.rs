//! The two benchmark instances shipped with the crate.

use crate::tsp::TspInstance;

pub const SIX_CUSTOMERS_CSV: &str = include_str!("../data/tsp6.csv");
pub const EIGHT_CUSTOMERS_CSV: &str = include_str!("../data/tsp8.csv");

/// Six customers, 720 tours, optimum 223 reached by 12 tours.
pub fn six_customers() -> TspInstance {
    TspInstance::from_csv_str(SIX_CUSTOMERS_CSV).expect("bundled instance is valid")
}

/// Eight customers, 40320 tours, optimum 108 reached by 16 tours.
pub fn eight_customers() -> TspInstance {
    TspInstance::from_csv_str(EIGHT_CUSTOMERS_CSV).expect("bundled instance is valid")
}

/// Looks a bundled instance up by name (`"six"`/`"6"` or `"eight"`/`"8"`).
pub fn by_name(name: &str) -> Option<TspInstance> {
    match name {
        "six" | "6" | "tsp6" => Some(six_customers()),
        "eight" | "8" | "tsp8" => Some(eight_customers()),
        _ => None,
    }
}
