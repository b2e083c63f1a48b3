//! Availability and assignment tables as CSV.
//!
//! ```text
//! player,Mon,Tues,Wed
//! Barry T,0,0,1
//! Tom B,1,1,0
//! ```
//!
//! Input may use LF or CRLF and standard double-quote escaping. Output is UTF-8
//! with LF line endings, no BOM and no trailing commas; fields are quoted only
//! when they need it. Row and column totals are never stored.

use thiserror::Error;

use crate::model::{validate_problem, Assignment, BitMatrix, Problem, ProblemError};

pub const HEADER_FIRST: &str = "player";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("input is empty; expected a header row starting with \"player\"")]
    Empty,
    #[error("header must start with \"player\", found {0:?}")]
    Header(String),
    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("non-binary entry {value:?} at line {line}, column {column} (player {player:?}, day {day:?})")]
    Cell {
        line: u64,
        column: usize,
        player: String,
        day: String,
        value: String,
    },
    #[error("invalid table: {0}")]
    Problem(#[from] ProblemError),
    #[error("assignment labels do not match the availability file: {0}")]
    LabelMismatch(String),
}

/// Raw labelled 0/1 table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub players: Vec<String>,
    pub days: Vec<String>,
    pub cells: Vec<Vec<i64>>,
}

pub fn parse_table(text: &str) -> Result<Table, FormatError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        None => return Err(FormatError::Empty),
        Some(r) => r.map_err(|e| FormatError::Csv(e.to_string()))?,
    };
    let first = header.get(0).unwrap_or_default();
    if first.trim() != HEADER_FIRST {
        return Err(FormatError::Header(first.to_string()));
    }
    let days: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut players = Vec::new();
    let mut cells = Vec::new();
    for record in records {
        let record = record.map_err(|e| FormatError::Csv(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != days.len() + 1 {
            return Err(FormatError::Ragged {
                line,
                expected: days.len() + 1,
                found: record.len(),
            });
        }
        let player = record[0].to_string();
        let row = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(k, raw)| match raw.trim() {
                "0" => Ok(0),
                "1" => Ok(1),
                _ => Err(FormatError::Cell {
                    line,
                    column: k + 2,
                    player: player.clone(),
                    day: days[k].clone(),
                    value: raw.to_string(),
                }),
            })
            .collect::<Result<Vec<i64>, _>>()?;
        players.push(player);
        cells.push(row);
    }
    Ok(Table {
        players,
        days,
        cells,
    })
}

pub fn parse_availability(text: &str, group_size: usize) -> Result<Problem, FormatError> {
    let table = parse_table(text)?;
    Ok(validate_problem(
        table.players,
        table.days,
        &table.cells,
        group_size,
    )?)
}

/// Parses an assignment whose labels must match `p` exactly, in order.
pub fn parse_assignment(text: &str, p: &Problem) -> Result<Assignment, FormatError> {
    let table = parse_table(text)?;
    if table.days != p.days() {
        return Err(FormatError::LabelMismatch(format!(
            "days {:?} vs {:?}",
            table.days,
            p.days()
        )));
    }
    if table.players != p.players() {
        return Err(FormatError::LabelMismatch(format!(
            "players {:?} vs {:?}",
            table.players,
            p.players()
        )));
    }
    let bools: Vec<Vec<bool>> = table
        .cells
        .iter()
        .map(|r| r.iter().map(|&v| v == 1).collect())
        .collect();
    Ok(Assignment::from_matrix(BitMatrix::from_bool_rows(
        &bools,
        p.num_days(),
    )))
}

pub fn write_table(players: &[String], days: &[String], matrix: &BitMatrix) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .flexible(true)
        .from_writer(Vec::new());
    let header = std::iter::once(HEADER_FIRST).chain(days.iter().map(String::as_str));
    writer.write_record(header).expect("in-memory write");
    for (i, name) in players.iter().enumerate() {
        let row = std::iter::once(name.as_str()).chain(matrix.row(i).iter().map(|&b| {
            if b {
                "1"
            } else {
                "0"
            }
        }));
        writer.write_record(row).expect("in-memory write");
    }
    let bytes = writer.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("utf-8 in, utf-8 out")
}

pub fn problem_to_csv(p: &Problem) -> String {
    write_table(p.players(), p.days(), p.availability())
}

pub fn assignment_to_csv(x: &Assignment, p: &Problem) -> String {
    write_table(p.players(), p.days(), x.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_crlf_and_quotes() {
        let text = "player,Mon,Tue\r\n\"Smith, J\",1,0\r\nLee,1,1\r\n";
        let p = parse_availability(text, 2).unwrap();
        assert_eq!(p.players(), &["Smith, J".to_string(), "Lee".to_string()]);
        assert_eq!(p.day_totals(), vec![2, 1]);
        assert_eq!(
            problem_to_csv(&p),
            "player,Mon,Tue\n\"Smith, J\",1,0\nLee,1,1\n"
        );
    }

    #[test]
    fn names_the_bad_cell() {
        let err = parse_availability("player,Mon,Tue\na,1,x\n", 2).unwrap_err();
        assert_eq!(
            err,
            FormatError::Cell {
                line: 2,
                column: 3,
                player: "a".into(),
                day: "Tue".into(),
                value: "x".into()
            }
        );
        let msg = err.to_string();
        assert!(msg.contains("\"x\"") && msg.contains("line 2") && msg.contains("Tue"));
    }

    #[test]
    fn rejects_structural_problems() {
        assert_eq!(parse_table(""), Err(FormatError::Empty));
        assert!(matches!(
            parse_table("name,Mon\na,1\n"),
            Err(FormatError::Header(_))
        ));
        assert!(matches!(
            parse_table("player,Mon,Tue\na,1\n"),
            Err(FormatError::Ragged {
                line: 2,
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            parse_availability("player,Mon\na,1\na,1\n", 2),
            Err(FormatError::Problem(ProblemError::DuplicateName { .. }))
        ));
        assert!(matches!(
            parse_availability("player,Mon\n", 2),
            Err(FormatError::Problem(ProblemError::NoPlayers))
        ));
    }

    #[test]
    fn strips_bom() {
        let p = parse_availability("\u{feff}player,d\na,1\nb,1\n", 2).unwrap();
        assert_eq!(p.num_players(), 2);
    }

    #[test]
    fn assignment_labels_must_match() {
        let p = parse_availability("player,d,e\na,1,1\nb,1,1\n", 2).unwrap();
        let x = parse_assignment("player,d,e\na,1,0\nb,1,0\n", &p).unwrap();
        assert_eq!(x.total_slots(), 2);
        assert!(matches!(
            parse_assignment("player,d,f\na,1,0\nb,1,0\n", &p),
            Err(FormatError::LabelMismatch(_))
        ));
        assert!(matches!(
            parse_assignment("player,d,e\nb,1,0\na,1,0\n", &p),
            Err(FormatError::LabelMismatch(_))
        ));
    }
}
