//! String parsing of model replies into structured suggestions.

use crate::vocab::normalize;

use super::types::{options_are_valid, AgentSuggestion, PresentationModality, QueryType};
use super::RecommendError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Reasoning,
    Action,
    Query,
    Modality,
    Options,
    Combined,
}

fn field_for(key: &str) -> Option<Field> {
    let key = normalize(key);
    // Leading enumeration such as "(2) the recommended agent action".
    let key = key.trim_start_matches(|c: char| c.is_ascii_digit());
    let key = key.strip_prefix("the").unwrap_or(key);
    let key = key
        .strip_prefix("a")
        .filter(|k| field_for_exact(k).is_some())
        .unwrap_or(key);
    field_for_exact(key)
}

fn field_for_exact(key: &str) -> Option<Field> {
    Some(match key {
        "reasoning" | "reason" | "cotreasoning" | "rationale" => Field::Reasoning,
        "action"
        | "agentaction"
        | "recommendedagentaction"
        | "recommendedaction"
        | "suggestedaction" => Field::Action,
        "queryformat" | "querytype" | "format" | "query" => Field::Query,
        "modality" | "presentationmodality" | "presentation" => Field::Modality,
        "options" | "choices" => Field::Options,
        "agentsuggestion" | "suggestion" => Field::Combined,
        _ => return None,
    })
}

/// Removes markdown decoration around a line (`**`, bullets, headings).
fn clean(line: &str) -> &str {
    line.trim()
        .trim_start_matches(['-', '*', '#', '>', ' '])
        .trim_end_matches(['*', ' '])
}

/// Strips a leading `1.` / `1)` / `(1)` marker; returns the number and rest.
fn numbered(line: &str) -> Option<(u32, &str)> {
    let s = line.trim_start();
    let s2 = s.strip_prefix('(').unwrap_or(s);
    let digits = s2.chars().take_while(char::is_ascii_digit).count();
    if digits == 0 || digits > 2 {
        return None;
    }
    let n: u32 = s2[..digits].parse().ok()?;
    let rest = &s2[digits..];
    let rest = rest
        .strip_prefix(')')
        .or_else(|| rest.strip_prefix('.'))
        .or_else(|| rest.strip_prefix(':'))?;
    Some((n, rest.trim()))
}

fn trim_option(raw: &str) -> String {
    raw.trim()
        .trim_matches(|c: char| {
            c.is_whitespace() || matches!(c, ',' | ';' | '.' | '"' | '\'' | '\u{201c}' | '\u{201d}')
        })
        .to_string()
}

/// Pulls three-way options out of free text: inline `1. a, 2. b, 3. c`
/// numbering first, then quoted phrases.
pub fn extract_options(text: &str) -> Vec<String> {
    let mut numbered_opts = Vec::new();
    let mut expect = 1u32;
    let mut rest = text;
    let mut start: Option<usize> = None;
    let mut offset = 0;
    // Locate "1." / "2." / "3." markers in order.
    while let Some(pos) = find_marker(rest, expect) {
        let marker_len = expect.to_string().len() + 1;
        let abs = offset + pos;
        if let Some(s) = start {
            numbered_opts.push(trim_option(&text[s..abs]));
        }
        start = Some(abs + marker_len);
        offset = abs + marker_len;
        rest = &text[offset..];
        expect += 1;
    }
    if let Some(s) = start {
        let tail = &text[s..];
        let tail = tail.split(['\n', ')']).next().unwrap_or(tail);
        numbered_opts.push(trim_option(tail));
    }
    if numbered_opts.len() >= 2 {
        return numbered_opts;
    }

    let mut quoted = extract_quoted(text);
    quoted.retain(|o| !o.is_empty());
    quoted
}

fn extract_quoted(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut rest = text;
    loop {
        let open = rest
            .char_indices()
            .find(|(_, c)| matches!(c, '\u{201c}' | '"'));
        let Some((i, c)) = open else { break };
        let close = if c == '"' { '"' } else { '\u{201d}' };
        let from = i + c.len_utf8();
        match rest[from..].find(close) {
            Some(len) => {
                out.push(trim_option(&rest[from..from + len]));
                rest = &rest[from + len + close.len_utf8()..];
            }
            None => break,
        }
    }
    out
}

/// Position of `n.` or `n)` that starts a token (preceded by start, space,
/// comma, colon or opening paren).
fn find_marker(text: &str, n: u32) -> Option<usize> {
    let digits = n.to_string();
    let bytes = text.as_bytes();
    let mut from = 0;
    while let Some(pos) = text[from..].find(&digits) {
        let at = from + pos;
        let after = at + digits.len();
        let boundary_before =
            at == 0 || matches!(bytes[at - 1], b' ' | b',' | b':' | b'(' | b'\n' | b'\t');
        let marker_after = matches!(bytes.get(after), Some(b'.' | b')'));
        let not_decimal = !matches!(bytes.get(after + 1), Some(b'0'..=b'9'));
        if boundary_before && marker_after && not_decimal {
            return Some(at);
        }
        from = after;
    }
    None
}

fn parse_query(raw: &str) -> Option<QueryType> {
    raw.parse().ok().or_else(|| {
        let head = raw.split(['(', ',', '.', ';', '\n']).next()?.trim();
        head.parse().ok().or_else(|| {
            let n = normalize(head);
            QueryType::ALL.iter().copied().find(|q| {
                n.starts_with(&normalize(q.as_str())) || n.starts_with(&normalize(q.label()))
            })
        })
    })
}

fn parse_modality(raw: &str) -> Option<PresentationModality> {
    raw.parse().ok().or_else(|| {
        let head = raw.split(['(', ',', '.', ';', '\n']).next()?.trim();
        head.parse().ok().or_else(|| {
            let n = normalize(head);
            // Longest names first so "audio visual" is not read as "audio".
            [
                ("audiovisual", PresentationModality::AudioVisual),
                ("audioandvisual", PresentationModality::AudioVisual),
                ("visual", PresentationModality::VisualOnly),
                ("audio", PresentationModality::AudioOnly),
                ("auditory", PresentationModality::AudioOnly),
            ]
            .into_iter()
            .find(|(name, _)| n.starts_with(name))
            .map(|(_, m)| m)
        })
    })
}

/// Extracts reasoning, action, query format and modality from a model reply.
///
/// Accepts `Key: value` lines (case-insensitive, markdown-tolerant, with
/// common synonyms for each key) or the single-line exemplar form
/// `AgentSuggestion: action | Binary | Audio`. Multi-choice options come
/// from numbered lines, or failing that from the action text itself.
pub fn parse_suggestion(raw_reply: &str) -> Result<AgentSuggestion, RecommendError> {
    let malformed = |reason: String| RecommendError::MalformedSuggestion {
        reason,
        raw: raw_reply.to_string(),
    };

    let mut reasoning: Option<String> = None;
    let mut action: Option<String> = None;
    let mut query: Option<String> = None;
    let mut modality: Option<String> = None;
    let mut options: Vec<String> = Vec::new();
    let mut current: Option<Field> = None;

    for line in raw_reply.lines() {
        let line = clean(line);
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            if let Some(field) = field_for(clean(key)) {
                let value = clean(value).trim_start_matches(['*', ' ']).to_string();
                current = Some(field);
                match field {
                    Field::Reasoning => reasoning = Some(value),
                    Field::Action => action = Some(value),
                    Field::Query => query = Some(value),
                    Field::Modality => modality = Some(value),
                    Field::Options => {
                        if !value.is_empty() {
                            options.extend(extract_options(&value));
                        }
                    }
                    Field::Combined => {
                        let parts: Vec<&str> = value.split('|').map(str::trim).collect();
                        if parts.len() == 3 {
                            action = Some(parts[0].to_string());
                            query = Some(parts[1].to_string());
                            modality = Some(parts[2].to_string());
                        } else {
                            action = Some(value);
                        }
                    }
                }
                continue;
            }
        }
        if let Some((_, rest)) = numbered(line) {
            if matches!(
                current,
                Some(Field::Action | Field::Options | Field::Combined)
            ) {
                options.push(trim_option(rest));
                continue;
            }
        }
        // Continuation line of a free-text field.
        let target = match current {
            Some(Field::Reasoning) => reasoning.as_mut(),
            Some(Field::Action) => action.as_mut(),
            _ => None,
        };
        if let Some(t) = target {
            if !t.is_empty() {
                t.push(' ');
            }
            t.push_str(line);
        }
    }

    let reasoning = reasoning
        .filter(|r| !r.trim().is_empty())
        .ok_or_else(|| malformed("missing reasoning".into()))?;
    let action = action
        .filter(|a| !a.trim().is_empty())
        .ok_or_else(|| malformed("missing agent action".into()))?;
    let query_raw = query.ok_or_else(|| malformed("missing query format".into()))?;
    let query_type = parse_query(&query_raw)
        .ok_or_else(|| malformed(format!("unrecognized query format `{query_raw}`")))?;
    let modality_raw = modality.ok_or_else(|| malformed("missing presentation modality".into()))?;
    let modality = parse_modality(&modality_raw)
        .ok_or_else(|| malformed(format!("unrecognized modality `{modality_raw}`")))?;

    if query_type == QueryType::MultiChoice {
        options.retain(|o| !o.is_empty());
        if options.is_empty() {
            options = extract_options(&action);
        }
        if !options_are_valid(&options) {
            return Err(malformed(format!(
                "multi-choice reply must carry three distinct options, found {}",
                options.len()
            )));
        }
    } else {
        options.clear();
    }

    AgentSuggestion {
        reasoning: reasoning.trim().to_string(),
        action_text: action.trim().to_string(),
        options,
        query_type,
        modality,
        warnings: Vec::new(),
    }
    .normalize()
    .map_err(malformed)
}
