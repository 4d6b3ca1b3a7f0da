//! Stylesheets: global rendering settings plus ordered condition/action rules.
//!
//! ```text
//! # whole-line comment
//! <globals>
//! radius = 400
//! gap_degrees = 2
//! bin_count = 6
//! palette = grey, red, #1f78d4, #3eb489, gold, purple
//! background = white
//! label_font_size = 12
//! </globals>
//! <rules>
//! <rule>
//! condition = value < 0
//! color = black
//! </rule>
//! </rules>
//! ```
//!
//! Global keys may also appear at the top level, outside `<globals>`. Rules
//! run in file order; each match overwrites the attributes it sets, and a
//! matching rule with `terminal = true` stops evaluation for that ribbon.

pub mod color;
mod expr;

use std::fmt::Write as _;

use crate::chord::ChordLayout;
use crate::error::{Error, Result};

pub use color::{default_palette, Color};
pub use expr::{CmpOp, Condition, NumVar, RibbonContext, TextVar};

#[derive(Debug, Clone, PartialEq)]
pub struct Globals {
    pub radius: f64,
    pub gap_degrees: f64,
    pub bin_count: usize,
    pub palette: Vec<Color>,
    pub background: Color,
    pub label_font_size: f64,
}

impl Default for Globals {
    fn default() -> Self {
        Self {
            radius: 400.0,
            gap_degrees: 2.0,
            bin_count: 6,
            palette: default_palette(),
            background: Color::from_static("white"),
            label_font_size: 12.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Actions {
    pub color: Option<Color>,
    pub opacity: Option<f64>,
    pub visible: Option<bool>,
    pub z: Option<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub condition: Condition,
    pub actions: Actions,
    pub terminal: bool,
}

impl Rule {
    pub fn new(condition: Condition, actions: Actions) -> Self {
        Self {
            condition,
            actions,
            terminal: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StyleSheet {
    pub globals: Globals,
    pub rules: Vec<Rule>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    Globals,
    Rules,
    Rule,
}

#[derive(Default)]
struct RuleDraft {
    line: usize,
    condition: Option<Condition>,
    actions: Actions,
    terminal: bool,
    seen: Vec<String>,
}

impl StyleSheet {
    pub fn parse(source: &str) -> Result<StyleSheet> {
        let mut sheet = StyleSheet::default();
        let mut stack: Vec<Block> = Vec::new();
        let mut draft: Option<RuleDraft> = None;
        let mut seen_globals: Vec<String> = Vec::new();

        for (idx, raw) in source.lines().enumerate() {
            let lineno = idx + 1;
            let mut line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }

            // leading open/close tags
            while let Some((tag, closing, rest)) = leading_tag(line) {
                handle_tag(tag, closing, lineno, &mut stack, &mut draft, &mut sheet)?;
                line = rest.trim_start();
            }
            // trailing close tags, kept in order
            let mut trailing = Vec::new();
            while let Some((tag, rest)) = trailing_close_tag(line) {
                trailing.push(tag);
                line = rest.trim_end();
            }

            if !line.is_empty() {
                let (key, value) = line
                    .split_once('=')
                    .map(|(k, v)| (k.trim(), v.trim()))
                    .ok_or_else(|| {
                        Error::style(lineno, format!("expected `key = value`, got {line:?}"))
                    })?;
                match stack.last() {
                    None | Some(Block::Globals) => {
                        if seen_globals.iter().any(|k| k == key) {
                            return Err(Error::style(lineno, format!("duplicate key {key}")));
                        }
                        seen_globals.push(key.to_string());
                        set_global(&mut sheet.globals, key, value)
                            .map_err(|m| Error::style(lineno, m))?;
                    }
                    Some(Block::Rule) => {
                        let d = draft.as_mut().expect("rule block has a draft");
                        if d.seen.iter().any(|k| k == key) {
                            return Err(Error::style(lineno, format!("duplicate key {key}")));
                        }
                        d.seen.push(key.to_string());
                        set_rule_key(d, key, value).map_err(|m| Error::style(lineno, m))?;
                    }
                    Some(Block::Rules) => {
                        return Err(Error::style(
                            lineno,
                            "keys inside <rules> must be within a <rule> block",
                        ));
                    }
                }
            }

            for tag in trailing.into_iter().rev() {
                handle_tag(tag, true, lineno, &mut stack, &mut draft, &mut sheet)?;
            }
        }

        if let Some(open) = stack.last() {
            return Err(Error::style(
                source.lines().count().max(1),
                format!("unclosed block <{}>", block_name(*open)),
            ));
        }
        let g = &sheet.globals;
        if g.palette.len() < g.bin_count {
            return Err(Error::style(
                0,
                format!(
                    "palette has {} colours but bin_count is {}",
                    g.palette.len(),
                    g.bin_count
                ),
            ));
        }
        Ok(sheet)
    }

    /// Canonical text form; parses back to an equal sheet.
    pub fn to_text(&self) -> String {
        let g = &self.globals;
        let mut out = String::from("<globals>\n");
        let _ = writeln!(out, "radius = {}", g.radius);
        let _ = writeln!(out, "gap_degrees = {}", g.gap_degrees);
        let _ = writeln!(out, "bin_count = {}", g.bin_count);
        let palette: Vec<&str> = g.palette.iter().map(Color::as_str).collect();
        let _ = writeln!(out, "palette = {}", palette.join(", "));
        let _ = writeln!(out, "background = {}", g.background);
        let _ = writeln!(out, "label_font_size = {}", g.label_font_size);
        out.push_str("</globals>\n<rules>\n");
        for rule in &self.rules {
            out.push_str("<rule>\n");
            let _ = writeln!(out, "condition = {}", rule.condition);
            if let Some(c) = &rule.actions.color {
                let _ = writeln!(out, "color = {c}");
            }
            if let Some(o) = rule.actions.opacity {
                let _ = writeln!(out, "opacity = {o}");
            }
            if let Some(v) = rule.actions.visible {
                let _ = writeln!(out, "visible = {v}");
            }
            if let Some(z) = rule.actions.z {
                let _ = writeln!(out, "z = {z}");
            }
            if rule.terminal {
                out.push_str("terminal = true\n");
            }
            out.push_str("</rule>\n");
        }
        out.push_str("</rules>\n");
        out
    }
}

fn block_name(b: Block) -> &'static str {
    match b {
        Block::Globals => "globals",
        Block::Rules => "rules",
        Block::Rule => "rule",
    }
}

fn leading_tag(line: &str) -> Option<(&str, bool, &str)> {
    let rest = line.strip_prefix('<')?;
    let (closing, rest) = match rest.strip_prefix('/') {
        Some(r) => (true, r),
        None => (false, rest),
    };
    let end = rest.find('>')?;
    let name = &rest[..end];
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return None;
    }
    Some((name, closing, &rest[end + 1..]))
}

fn trailing_close_tag(line: &str) -> Option<(&str, &str)> {
    let body = line.strip_suffix('>')?;
    let start = body.rfind("</")?;
    let name = &body[start + 2..];
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return None;
    }
    Some((name, &line[..start]))
}

fn handle_tag(
    name: &str,
    closing: bool,
    line: usize,
    stack: &mut Vec<Block>,
    draft: &mut Option<RuleDraft>,
    sheet: &mut StyleSheet,
) -> Result<()> {
    let block = match name {
        "globals" => Block::Globals,
        "rules" => Block::Rules,
        "rule" => Block::Rule,
        other => return Err(Error::style(line, format!("unknown block <{other}>"))),
    };
    if closing {
        match stack.pop() {
            Some(open) if open == block => {}
            Some(open) => {
                return Err(Error::style(
                    line,
                    format!("</{name}> closes <{}>", block_name(open)),
                ))
            }
            None => return Err(Error::style(line, format!("</{name}> without opening tag"))),
        }
        if block == Block::Rule {
            let d = draft.take().expect("open rule has a draft");
            let condition = d
                .condition
                .ok_or_else(|| Error::style(d.line, "rule has no condition"))?;
            sheet.rules.push(Rule {
                condition,
                actions: d.actions,
                terminal: d.terminal,
            });
        }
        return Ok(());
    }
    let parent = stack.last().copied();
    let allowed = match block {
        Block::Globals | Block::Rules => parent.is_none(),
        Block::Rule => parent == Some(Block::Rules),
    };
    if !allowed {
        return Err(Error::style(line, format!("<{name}> is not allowed here")));
    }
    if block == Block::Rule {
        *draft = Some(RuleDraft {
            line,
            ..RuleDraft::default()
        });
    }
    stack.push(block);
    Ok(())
}

fn parse_number(key: &str, value: &str) -> std::result::Result<f64, String> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("{key} must be a number, got {value:?}"))
}

fn parse_color(value: &str) -> std::result::Result<Color, String> {
    value.parse::<Color>().map_err(|e| e.to_string())
}

fn set_global(g: &mut Globals, key: &str, value: &str) -> std::result::Result<(), String> {
    match key {
        "radius" => {
            let r = parse_number(key, value)?;
            if r <= 0.0 {
                return Err("radius must be positive".into());
            }
            g.radius = r;
        }
        "gap_degrees" => {
            let gap = parse_number(key, value)?;
            if !(0.0..360.0).contains(&gap) {
                return Err("gap_degrees must be in [0, 360)".into());
            }
            g.gap_degrees = gap;
        }
        "bin_count" => {
            let n: usize = value
                .parse()
                .map_err(|_| format!("bin_count must be an integer, got {value:?}"))?;
            if n < 2 {
                return Err("bin_count must be at least 2".into());
            }
            g.bin_count = n;
        }
        "palette" => {
            g.palette = value
                .split(',')
                .map(|c| parse_color(c.trim()))
                .collect::<std::result::Result<_, _>>()?;
        }
        "background" => g.background = parse_color(value)?,
        "label_font_size" => {
            let s = parse_number(key, value)?;
            if s <= 0.0 {
                return Err("label_font_size must be positive".into());
            }
            g.label_font_size = s;
        }
        other => return Err(format!("unknown key {other}")),
    }
    Ok(())
}

fn set_rule_key(d: &mut RuleDraft, key: &str, value: &str) -> std::result::Result<(), String> {
    let parse_bool = |v: &str| match v {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        _ => Err(format!("{key} must be true or false, got {v:?}")),
    };
    match key {
        "condition" => d.condition = Some(Condition::parse(value)?),
        "color" => d.actions.color = Some(parse_color(value)?),
        "opacity" => {
            let o = parse_number(key, value)?;
            if !(0.0..=1.0).contains(&o) {
                return Err(format!("opacity must be in [0, 1], got {o}"));
            }
            d.actions.opacity = Some(o);
        }
        "visible" => d.actions.visible = Some(parse_bool(value)?),
        "z" => {
            d.actions.z = Some(
                value
                    .parse()
                    .map_err(|_| format!("z must be an integer, got {value:?}"))?,
            )
        }
        "terminal" => d.terminal = parse_bool(value)?,
        other => return Err(format!("unknown key {other}")),
    }
    Ok(())
}

/// Rewrites ribbon styles by running every rule against every ribbon.
/// Geometry is never touched; hidden ribbons stay in the layout.
pub fn apply_rules(layout: &ChordLayout, sheet: &StyleSheet) -> ChordLayout {
    let mut out = layout.clone();
    for rb in &mut out.ribbons {
        let ctx = RibbonContext {
            value: rb.edge.value,
            bin: rb.edge.bin,
            source: &rb.edge.source,
            target: &rb.edge.target,
        };
        for rule in &sheet.rules {
            if !rule.condition.eval(&ctx) {
                continue;
            }
            let a = &rule.actions;
            if let Some(c) = &a.color {
                rb.style.color = c.clone();
            }
            if let Some(o) = a.opacity {
                rb.style.opacity = o;
            }
            if let Some(v) = a.visible {
                rb.style.visible = v;
            }
            if let Some(z) = a.z {
                rb.style.z = z;
            }
            if rule.terminal {
                break;
            }
        }
    }
    out
}
