use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::Write;

use chrono::{DateTime, NaiveDate, NaiveDateTime};

use super::{Activity, EventLog, LogError, Trace};

#[derive(Clone, Debug, PartialEq, PartialOrd)]
enum OrderKey {
    Number(f64),
    Text(String),
}

/// Reads a CSV event table. Rows are grouped by `case_column`; within a case
/// they are ordered by `order_column` (numerically when every value is a
/// number, otherwise as ISO-8601 text) or, without an order column, by file
/// position.
pub fn parse_csv(
    source: &[u8],
    case_column: &str,
    activity_column: &str,
    order_column: Option<&str>,
) -> Result<EventLog, LogError> {
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_reader(source);
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| LogError::MissingColumn(name.to_string()))
    };
    let case_idx = column(case_column)?;
    let activity_idx = column(activity_column)?;
    let order_idx = order_column.map(column).transpose()?;

    // case id -> (first row, [(order value, row, activity)])
    let mut cases: BTreeMap<String, (usize, Vec<(Option<String>, usize, Activity)>)> =
        BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        // header is row 1
        let row = i + 2;
        let case = record.get(case_idx).unwrap_or("").to_string();
        let activity = record.get(activity_idx).unwrap_or("").trim();
        if activity.is_empty() {
            return Err(LogError::EmptyActivity { row });
        }
        let order = order_idx.map(|idx| record.get(idx).unwrap_or("").trim().to_string());
        cases
            .entry(case)
            .or_insert_with(|| (row, Vec::new()))
            .1
            .push((order, row, Activity::parse(activity)?));
    }

    let numeric = order_idx.is_some()
        && cases
            .values()
            .flat_map(|(_, rows)| rows.iter())
            .all(|(o, _, _)| o.as_deref().is_some_and(|v| v.parse::<f64>().is_ok()));

    let mut log = EventLog::new();
    for (_, mut rows) in cases.into_values() {
        if order_idx.is_some() {
            let mut keyed = Vec::with_capacity(rows.len());
            for (order, row, activity) in rows.drain(..) {
                let value = order.unwrap_or_default();
                let key = if numeric {
                    OrderKey::Number(value.parse().expect("checked numeric"))
                } else if is_iso8601(&value) {
                    OrderKey::Text(value)
                } else {
                    return Err(LogError::BadOrderValue { row, value });
                };
                keyed.push((key, row, activity));
            }
            keyed.sort_by(|a, b| {
                a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(a.1.cmp(&b.1))
            });
            log.add(keyed.into_iter().map(|(_, _, a)| a).collect(), 1);
        } else {
            log.add(Trace::new(rows.into_iter().map(|(_, _, a)| a).collect()), 1);
        }
    }
    Ok(log)
}

fn is_iso8601(value: &str) -> bool {
    DateTime::parse_from_rfc3339(value).is_ok()
        || NaiveDateTime::parse_from_str(value, "%Y-%m-%dT%H:%M:%S%.f").is_ok()
        || NaiveDateTime::parse_from_str(value, "%Y-%m-%d %H:%M:%S%.f").is_ok()
        || NaiveDate::parse_from_str(value, "%Y-%m-%d").is_ok()
}

/// Writes one row per event with columns `case,activity,index`. Case ids
/// are assigned in variant order; `index` is the 0-based event position.
pub fn write_csv<W: Write>(log: &EventLog, out: W) -> Result<(), LogError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["case", "activity", "index"])?;
    let mut case = 0u64;
    for (trace, count) in log.variants() {
        for _ in 0..count {
            case += 1;
            for (i, a) in trace.iter().enumerate() {
                writer.write_record([case.to_string(), a.to_string(), i.to_string()])?;
            }
        }
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn variants(log: &EventLog) -> Vec<(String, u64)> {
        log.variants().map(|(t, c)| (t.to_string(), c)).collect()
    }

    #[test]
    fn groups_rows_by_case_in_file_order() {
        let csv = b"case,activity\n1,a\n1,b\n2,a\n";
        let log = parse_csv(csv, "case", "activity", None).unwrap();
        assert_eq!(variants(&log), vec![("<a>".into(), 1), ("<a,b>".into(), 1)]);
    }

    #[test]
    fn order_column_restores_event_order() {
        let csv = b"case,activity,time\n2,a,2021-01-01T00:00:00\n1,b,2021-01-01T10:00:00\n1,a,2021-01-01T09:00:00\n";
        let log = parse_csv(csv, "case", "activity", Some("time")).unwrap();
        assert_eq!(variants(&log), vec![("<a>".into(), 1), ("<a,b>".into(), 1)]);
    }

    #[test]
    fn numeric_order_is_not_lexicographic() {
        let csv = b"case,activity,idx\n1,b,10\n1,a,9\n";
        let log = parse_csv(csv, "case", "activity", Some("idx")).unwrap();
        assert_eq!(variants(&log), vec![("<a,b>".into(), 1)]);
    }

    #[test]
    fn header_only_is_an_empty_log() {
        let log = parse_csv(b"case,activity\n", "case", "activity", None).unwrap();
        assert!(log.is_empty());
    }

    #[test]
    fn missing_column_is_named() {
        match parse_csv(b"case,act\n1,a\n", "case", "activity", None) {
            Err(LogError::MissingColumn(c)) => assert_eq!(c, "activity"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_order_value_reports_row() {
        let csv = b"case,activity,time\n1,a,2021-01-01\n1,b,yesterday\n";
        match parse_csv(csv, "case", "activity", Some("time")) {
            Err(LogError::BadOrderValue { row, value }) => {
                assert_eq!(row, 3);
                assert_eq!(value, "yesterday");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn written_csv_reads_back() {
        let csv = b"case,activity\n1,a\n1,b\n2,a\n3,a\n3,b\n";
        let log = parse_csv(csv, "case", "activity", None).unwrap();
        let mut out = Vec::new();
        write_csv(&log, &mut out).unwrap();
        let again = parse_csv(&out, "case", "activity", Some("index")).unwrap();
        assert_eq!(again, log);
    }
}
