//! Bundled instances.
//!
//! `table1*` is a seventeen-player weekday tennis group (doubles, `g = 4`).
//! Its published assignment is stored twice: verbatim, and with Keith I's
//! Tuesday game removed. The verbatim copy puts nine players on Tuesday, which
//! no doubles schedule can do, and gives Keith I two games against a stated
//! total of one; dropping that single cell fixes both.
//!
//! `table2` is the eleven-player instance with no efficient strongly
//! envy-free assignment.

use crate::csv_format::{parse_assignment, parse_availability};
use crate::model::{Assignment, Problem};
use crate::reduce::reduce;

pub const TABLE1_CSV: &str = include_str!("../fixtures/table1.csv");
pub const TABLE1_ASSIGNMENT_PRINTED_CSV: &str =
    include_str!("../fixtures/table1_assignment_printed.csv");
pub const TABLE1_ASSIGNMENT_CORRECTED_CSV: &str =
    include_str!("../fixtures/table1_assignment_corrected.csv");
pub const TABLE2_CSV: &str = include_str!("../fixtures/table2.csv");

pub const TENNIS: usize = 4;

pub fn table1() -> Problem {
    parse_availability(TABLE1_CSV, TENNIS).expect("bundled fixture parses")
}

/// Table 1 without Friday and Gordon B.
pub fn table1_reduced() -> Problem {
    reduce(&table1()).problem
}

pub fn table1_assignment_printed() -> Assignment {
    parse_assignment(TABLE1_ASSIGNMENT_PRINTED_CSV, &table1()).expect("bundled fixture parses")
}

pub fn table1_assignment_corrected() -> Assignment {
    parse_assignment(TABLE1_ASSIGNMENT_CORRECTED_CSV, &table1()).expect("bundled fixture parses")
}

pub fn table2() -> Problem {
    parse_availability(TABLE2_CSV, TENNIS).expect("bundled fixture parses")
}

/// Hand-built efficient, strongly envy-free assignment on [`table1_reduced`].
pub fn table1_envy_free_assignment() -> Assignment {
    const ROSTERS: [(&str, &[&str]); 4] = [
        ("Mon", &["Peter W", "Keith B", "Brian F", "George StC"]),
        (
            "Tues",
            &[
                "John S", "Phil M", "Ken L", "Tom B", "Peter W", "Keith I", "Brian F", "Peter K",
            ],
        ),
        ("Wed", &["Michael L", "Keith I", "Mike M", "Barry T"]),
        (
            "Thurs",
            &[
                "Barry T",
                "Tom B",
                "Colin C",
                "Mike M",
                "Alan C",
                "George StC",
                "Peter K",
                "Willie McM",
            ],
        ),
    ];
    let p = table1_reduced();
    let mut x = Assignment::zeros(p.num_players(), p.num_days());
    for (day, names) in ROSTERS {
        let k = p.day_index(day).expect("known day");
        for name in names {
            x.set(p.player_index(name).expect("known player"), k, true);
        }
    }
    x
}
