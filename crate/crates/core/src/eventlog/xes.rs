//! Reader for the subset of XES used by discovery: one trace per `<trace>`,
//! each event contributing its `concept:name`. When an event carries a
//! `lifecycle:transition`, only `complete` events are kept.

use quick_xml::events::{BytesStart, Event};
use quick_xml::{Reader, XmlVersion};

use super::{Activity, EventLog, LogError, Trace};

const NAME_KEY: &str = "concept:name";
const LIFECYCLE_KEY: &str = "lifecycle:transition";

#[derive(Default)]
struct PendingEvent {
    name: Option<String>,
    lifecycle: Option<String>,
}

pub fn parse_xes(source: &[u8]) -> Result<EventLog, LogError> {
    let mut reader = Reader::from_reader(source);
    reader.config_mut().trim_text(true);

    let mut log = EventLog::new();
    let mut seen_root = false;
    // element depth, and the depths at which the open trace / event started
    let mut depth = 0usize;
    let mut trace: Option<(usize, Vec<Activity>)> = None;
    let mut event: Option<(usize, PendingEvent)> = None;
    let mut buf = Vec::new();

    loop {
        let ev = reader
            .read_event_into(&mut buf)
            .map_err(|e| xml_error(source, reader.error_position(), e.to_string()))?;
        match ev {
            Event::Start(ref start) | Event::Empty(ref start) => {
                let is_empty = matches!(ev, Event::Empty(_));
                let name = start.local_name();
                let name = name.as_ref();
                if !seen_root {
                    seen_root = true;
                    if name != "log" {
                        return Err(LogError::NotXes(format!(
                            "root element is <{}>, expected <log>",
                            name
                        )));
                    }
                } else if name == "trace" && trace.is_none() {
                    if is_empty {
                        log.add(Trace::default(), 1);
                    } else {
                        trace = Some((depth, Vec::new()));
                    }
                } else if name == "event" && trace.is_some() && event.is_none() {
                    let pending = PendingEvent::default();
                    if is_empty {
                        finish_event(&mut trace, pending)?;
                    } else {
                        event = Some((depth, pending));
                    }
                } else if let Some((event_depth, pending)) = event.as_mut() {
                    // attributes directly below <event>; nested values are ignored
                    if depth == *event_depth + 1 {
                        read_attribute(source, &reader, start, pending)?;
                    }
                }
                if !is_empty {
                    depth += 1;
                }
            }
            Event::End(_) => {
                depth = depth.saturating_sub(1);
                if event.as_ref().is_some_and(|(d, _)| *d == depth) {
                    let (_, pending) = event.take().expect("checked above");
                    finish_event(&mut trace, pending)?;
                } else if trace.as_ref().is_some_and(|(d, _)| *d == depth) {
                    let (_, events) = trace.take().expect("checked above");
                    log.add(Trace::new(events), 1);
                }
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }

    if !seen_root {
        return Err(LogError::EmptyDocument);
    }
    Ok(log)
}

fn read_attribute(
    source: &[u8],
    reader: &Reader<&[u8]>,
    start: &BytesStart<'_>,
    pending: &mut PendingEvent,
) -> Result<(), LogError> {
    let mut key = None;
    let mut value = None;
    for attr in start.attributes() {
        let attr = attr.map_err(|e| xml_error(source, reader.buffer_position(), e.to_string()))?;
        let text = attr
            .normalized_value(XmlVersion::Implicit1_0)
            .map_err(|e| xml_error(source, reader.buffer_position(), e.to_string()))?
            .into_owned();
        match attr.key.as_ref() {
            "key" => key = Some(text),
            "value" => value = Some(text),
            _ => {}
        }
    }
    match key.as_deref() {
        Some(NAME_KEY) => pending.name = value,
        Some(LIFECYCLE_KEY) => pending.lifecycle = value,
        _ => {}
    }
    Ok(())
}

fn finish_event(
    trace: &mut Option<(usize, Vec<Activity>)>,
    pending: PendingEvent,
) -> Result<(), LogError> {
    let keep = pending
        .lifecycle
        .as_deref()
        .map_or(true, |l| l.eq_ignore_ascii_case("complete"));
    if let (true, Some(name), Some((_, events))) = (keep, pending.name, trace.as_mut()) {
        if !name.is_empty() {
            events.push(Activity::parse(name)?);
        }
    }
    Ok(())
}

pub(crate) fn xml_error(source: &[u8], position: u64, message: String) -> LogError {
    let (line, column) = line_column(source, position as usize);
    LogError::Xml { line, column, message }
}

/// 1-based line and column of a byte offset.
pub(crate) fn line_column(source: &[u8], offset: usize) -> (usize, usize) {
    let offset = offset.min(source.len());
    let before = &source[..offset];
    let line = before.iter().filter(|b| **b == b'\n').count() + 1;
    let line_start = before.iter().rposition(|b| *b == b'\n').map_or(0, |i| i + 1);
    (line, offset - line_start + 1)
}
