//! PNML import and export for place/transition nets.
//!
//! Node ids double as node names. A transition is silent when it has no
//! `<name>` or carries a `toolspecific` element with
//! `activity="$invisible$"`, as written by common process-mining tools.

use std::collections::BTreeMap;

use quick_xml::escape::resolve_predefined_entity;
use quick_xml::events::{BytesStart, BytesText, Event};
use quick_xml::{Reader, Writer, XmlVersion};
use thiserror::Error;

use super::{LabeledNet, NetError, NodeId, StructureError, WorkflowNet};
use crate::eventlog::xes::line_column;
use crate::eventlog::Activity;

const INVISIBLE: &str = "$invisible$";

#[derive(Debug, Error)]
pub enum PnmlError {
    #[error("malformed XML at line {line}, column {column}: {message}")]
    Xml { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("not a workflow net: {0}")]
    Structure(#[from] StructureError),
}

#[derive(Default)]
struct PendingTransition {
    id: String,
    name: Option<String>,
    invisible: bool,
}

fn attr(source: &[u8], reader: &Reader<&[u8]>, start: &BytesStart<'_>, key: &str) -> Result<Option<String>, PnmlError> {
    for a in start.attributes() {
        let a = a.map_err(|e| xml_error(source, reader.buffer_position(), e.to_string()))?;
        if a.key.local_name().as_ref() == key {
            let v = a
                .normalized_value(XmlVersion::Implicit1_0)
                .map_err(|e| xml_error(source, reader.buffer_position(), e.to_string()))?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

fn xml_error(source: &[u8], position: u64, message: String) -> PnmlError {
    let (line, column) = line_column(source, position as usize);
    PnmlError::Xml { line, column, message }
}

/// Reads the first `<net>` of a PNML document.
pub fn parse_pnml(source: &[u8]) -> Result<LabeledNet, PnmlError> {
    // text is not trimmed so that spaces around entity references survive
    let mut reader = Reader::from_reader(source);
    let mut buf = Vec::new();
    let mut stack: Vec<String> = Vec::new();
    let mut places: Vec<String> = Vec::new();
    let mut transitions: Vec<PendingTransition> = Vec::new();
    let mut arcs: Vec<(String, String)> = Vec::new();
    let mut current: Option<PendingTransition> = None;
    let mut nets = 0usize;
    let mut seen_root = false;

    loop {
        let ev = reader
            .read_event_into(&mut buf)
            .map_err(|e| xml_error(source, reader.error_position(), e.to_string()))?;
        match ev {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let is_empty = matches!(ev, Event::Empty(_));
                let name = e.local_name().as_ref().to_string();
                if !seen_root {
                    seen_root = true;
                    if name != "pnml" {
                        return Err(PnmlError::Invalid(format!("root element is <{name}>, expected <pnml>")));
                    }
                }
                let parent = stack.last().map(String::as_str);
                match name.as_str() {
                    "net" => nets += 1,
                    _ if nets != 1 => {}
                    "place" => {
                        let id = attr(source, &reader, e, "id")?
                            .ok_or_else(|| PnmlError::Invalid("place without id".into()))?;
                        places.push(id);
                    }
                    "transition" => {
                        let id = attr(source, &reader, e, "id")?
                            .ok_or_else(|| PnmlError::Invalid("transition without id".into()))?;
                        let t = PendingTransition { id, ..Default::default() };
                        if is_empty {
                            transitions.push(t);
                        } else {
                            current = Some(t);
                        }
                    }
                    "arc" => {
                        let s = attr(source, &reader, e, "source")?;
                        let t = attr(source, &reader, e, "target")?;
                        match (s, t) {
                            (Some(s), Some(t)) => arcs.push((s, t)),
                            _ => return Err(PnmlError::Invalid("arc without source or target".into())),
                        }
                    }
                    "toolspecific"
                        if parent == Some("transition")
                            && attr(source, &reader, e, "activity")?.as_deref() == Some(INVISIBLE) =>
                    {
                        if let Some(t) = current.as_mut() {
                            t.invisible = true;
                        }
                    }
                    _ => {}
                }
                if !is_empty {
                    stack.push(name);
                }
            }
            Event::Text(ref e) => {
                if in_transition_name(&stack) {
                    if let Some(t) = current.as_mut() {
                        t.name.get_or_insert_with(String::new).push_str(&e.xml10_content());
                    }
                }
            }
            Event::GeneralRef(ref e) => {
                if in_transition_name(&stack) {
                    let resolved = match e.resolve_char_ref() {
                        Ok(Some(c)) => c.to_string(),
                        _ => {
                            let entity = e.xml10_content();
                            resolve_predefined_entity(&entity)
                                .ok_or_else(|| PnmlError::Invalid(format!("unknown entity &{entity};")))?
                                .to_string()
                        }
                    };
                    if let Some(t) = current.as_mut() {
                        t.name.get_or_insert_with(String::new).push_str(&resolved);
                    }
                }
            }
            Event::End(_) => {
                if stack.pop().as_deref() == Some("transition") {
                    if let Some(t) = current.take() {
                        transitions.push(t);
                    }
                }
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    if !seen_root {
        return Err(PnmlError::Invalid("empty document".into()));
    }
    if nets == 0 {
        return Err(PnmlError::Invalid("document contains no <net>".into()));
    }

    let mut net = LabeledNet::new();
    let mut ids: BTreeMap<String, NodeId> = BTreeMap::new();
    for p in places {
        let id = net.add_place(p.clone())?;
        ids.insert(p, id.into());
    }
    for t in transitions {
        let label = match (t.invisible, t.name.as_deref().map(str::trim)) {
            (false, Some(n)) if !n.is_empty() => Some(Activity::new(n)),
            _ => None,
        };
        let id = net.add_transition(t.id.clone(), label)?;
        ids.insert(t.id, id.into());
    }
    for (s, t) in arcs {
        let from = *ids.get(&s).ok_or_else(|| PnmlError::Invalid(format!("arc source `{s}` is unknown")))?;
        let to = *ids.get(&t).ok_or_else(|| PnmlError::Invalid(format!("arc target `{t}` is unknown")))?;
        net.add_arc(from, to)?;
    }
    Ok(net)
}

fn in_transition_name(stack: &[String]) -> bool {
    matches!(stack, [.., a, b, c] if a == "transition" && b == "name" && c == "text")
}

/// Reads a PNML net and identifies its workflow roles structurally.
pub fn read_workflow_net(source: &[u8]) -> Result<WorkflowNet, PnmlError> {
    Ok(WorkflowNet::from_net(parse_pnml(source)?)?)
}

pub fn write_pnml(w: &WorkflowNet) -> String {
    let net = w.net();
    let mut writer = Writer::new_with_indent(Vec::new(), b' ', 2);
    let text = |wr: &mut Writer<Vec<u8>>, s: &str| -> std::io::Result<()> {
        wr.create_element("text").write_text_content(BytesText::new(s))?;
        Ok(())
    };
    writer
        .create_element("pnml")
        .write_inner_content(|wr| {
            wr.create_element("net")
                .with_attribute(("id", "net1"))
                .with_attribute(("type", "http://www.pnml.org/version-2009/grammar/pnmlcoremodel"))
                .write_inner_content(|wr| {
                    wr.create_element("page").with_attribute(("id", "page1")).write_inner_content(|wr| {
                        for p in net.places() {
                            let name = net.place_name(p);
                            wr.create_element("place").with_attribute(("id", name)).write_inner_content(|wr| {
                                wr.create_element("name").write_inner_content(|wr| text(wr, name))?;
                                if p == w.source() {
                                    wr.create_element("initialMarking").write_inner_content(|wr| text(wr, "1"))?;
                                }
                                Ok(())
                            })?;
                        }
                        for t in net.transitions() {
                            let el = wr.create_element("transition").with_attribute(("id", net.transition_name(t)));
                            match net.label(t) {
                                Some(a) => {
                                    el.write_inner_content(|wr| {
                                        wr.create_element("name").write_inner_content(|wr| text(wr, a.as_str()))?;
                                        Ok(())
                                    })?;
                                }
                                None => {
                                    el.write_inner_content(|wr| {
                                        wr.create_element("toolspecific")
                                            .with_attribute(("tool", "ProM"))
                                            .with_attribute(("version", "6.4"))
                                            .with_attribute(("activity", INVISIBLE))
                                            .write_empty()?;
                                        Ok(())
                                    })?;
                                }
                            }
                        }
                        for (i, (from, to)) in net.arcs().into_iter().enumerate() {
                            wr.create_element("arc")
                                .with_attribute(("id", format!("arc{}", i + 1).as_str()))
                                .with_attribute(("source", net.node_name(from)))
                                .with_attribute(("target", net.node_name(to)))
                                .write_empty()?;
                        }
                        Ok(())
                    })?;
                    Ok(())
                })?;
            Ok(())
        })
        .expect("writing to memory");
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&String::from_utf8(writer.into_inner()).expect("utf-8 output"));
    out.push('\n');
    out
}
