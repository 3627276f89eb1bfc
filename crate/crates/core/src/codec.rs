//! Input and output formats: text disk, query, and answer lists, plus
//! the versioned binary structure container.
//!
//! Disk, query, and answer files are line-oriented UTF-8; `#` starts a
//! comment and blank lines are skipped. Floats are written in Rust's
//! shortest round-trip decimal form, so write-then-parse reproduces
//! the exact f64 bits. Parse errors name the offending 1-based line.
//!
//! Structure files are fixed-width little-endian binary: a 4-byte
//! magic and a format version, the original disk list, then one block
//! per frame (right, top, bottom) holding the surviving arcs as
//! `(disk id, theta_lo, theta_hi)` records plus the locator tables —
//! slab boundaries, persistent tree nodes, version roots. Each section
//! is a `u64` count followed by that many fixed-width records, so file
//! size is an exact linear function of the table sizes. Arc geometry
//! in rotated frames is reconstructed from the disk list on load, so a
//! reloaded structure answers queries without any rebuilding.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::arcs::{Arc, ArcMap, Frame};
use crate::engine::Structure;
use crate::error::{Error, Result};
use crate::geom::{Disk, Point};
use crate::locator::Locator;
use crate::pslab::{FrozenNode, PersistentOrder};

/// Bumped whenever the structure container layout changes.
pub const STRUCTURE_FORMAT_VERSION: u32 = 1;

/// Magic bytes opening every structure file.
pub const STRUCTURE_MAGIC: [u8; 4] = *b"MXDS";

fn err_at(ln: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {}: {msg}", ln + 1))
}

/// Iterator over content lines: comments stripped, blanks skipped,
/// 0-based line numbers kept for error reporting.
struct Cursor<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { lines: text.lines().enumerate() }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.lines.by_ref() {
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if !line.is_empty() {
                return Some((i, line));
            }
        }
        None
    }

    fn demand(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next()
            .ok_or_else(|| Error::Parse(format!("unexpected end of file, expected {what}")))
    }
}

fn take<'a, T: FromStr>(
    it: &mut impl Iterator<Item = &'a str>,
    ln: usize,
    what: &str,
) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let tok = it.next().ok_or_else(|| err_at(ln, format!("missing {what}")))?;
    tok.parse().map_err(|e| err_at(ln, format!("bad {what} `{tok}`: {e}")))
}

fn done<'a>(mut it: impl Iterator<Item = &'a str>, ln: usize) -> Result<()> {
    match it.next() {
        None => Ok(()),
        Some(tok) => Err(err_at(ln, format!("unexpected trailing field `{tok}`"))),
    }
}

// ---------------------------------------------------------------- disks

fn parse_disk_line(ln: usize, line: &str) -> Result<Disk<f64>> {
    let mut it = line.split_whitespace();
    let id = take(&mut it, ln, "disk id")?;
    let x = take(&mut it, ln, "center x")?;
    let y = take(&mut it, ln, "center y")?;
    let r = take(&mut it, ln, "radius")?;
    done(it, ln)?;
    Ok(Disk::new(id, Point::new(x, y), r))
}

/// Parse a disk file: one `id x y r` per line.
pub fn parse_disks(text: &str) -> Result<Vec<Disk<f64>>> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    while let Some((ln, line)) = cur.next() {
        out.push(parse_disk_line(ln, line)?);
    }
    Ok(out)
}

/// Render a disk file; inverse of [`parse_disks`] up to the header
/// comment.
pub fn write_disks(disks: &[Disk<f64>]) -> String {
    let mut s = String::from("# id x y r\n");
    for d in disks {
        writeln!(s, "{} {} {} {}", d.id, d.center.x, d.center.y, d.radius).unwrap();
    }
    s
}

// -------------------------------------------------------------- queries

/// Parse a query file: one `x y` per line.
pub fn parse_queries(text: &str) -> Result<Vec<Point<f64>>> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    while let Some((ln, line)) = cur.next() {
        let mut it = line.split_whitespace();
        let x = take(&mut it, ln, "query x")?;
        let y = take(&mut it, ln, "query y")?;
        done(it, ln)?;
        out.push(Point::new(x, y));
    }
    Ok(out)
}

/// Render a query file; inverse of [`parse_queries`].
pub fn write_queries(queries: &[Point<f64>]) -> String {
    let mut s = String::from("# x y\n");
    for q in queries {
        writeln!(s, "{} {}", q.x, q.y).unwrap();
    }
    s
}

/// Render an answers file: one disk id or `NONE` per line.
pub fn write_answers(answers: impl IntoIterator<Item = Option<u64>>) -> String {
    let mut s = String::new();
    for a in answers {
        match a {
            Some(id) => writeln!(s, "{id}").unwrap(),
            None => s.push_str("NONE\n"),
        }
    }
    s
}

// ------------------------------------------------------------ structure

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_f64(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

/// Serialize a built structure to the versioned binary container.
pub fn write_structure(s: &Structure<f64>) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&STRUCTURE_MAGIC);
    put_u32(&mut out, STRUCTURE_FORMAT_VERSION);
    put_u64(&mut out, s.disks().len() as u64);
    for d in s.disks() {
        put_u64(&mut out, d.id);
        put_f64(&mut out, d.center.x);
        put_f64(&mut out, d.center.y);
        put_f64(&mut out, d.radius);
    }
    for f in Frame::ALL {
        let (arcs, boundaries, order) = s.locator(f).parts();
        put_u64(&mut out, arcs.len() as u64);
        for a in arcs {
            put_u64(&mut out, a.disk.id);
            put_f64(&mut out, a.lo);
            put_f64(&mut out, a.hi);
        }
        put_u64(&mut out, boundaries.len() as u64);
        for &b in boundaries {
            put_f64(&mut out, b);
        }
        let (nodes, roots) = order.frozen_dump();
        put_u64(&mut out, nodes.len() as u64);
        for n in &nodes {
            put_u32(&mut out, n.payload);
            put_u32(&mut out, n.left);
            put_u32(&mut out, n.right);
            put_u32(&mut out, n.extra_version);
            put_u32(&mut out, n.extra_target);
            out.push(u8::from(n.extra_right));
        }
        put_u64(&mut out, roots.len() as u64);
        for &r in &roots {
            put_u32(&mut out, r);
        }
    }
    out
}

/// Byte reader with offsets in error messages.
struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn bytes<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        match self.buf.get(self.pos..self.pos + N) {
            Some(s) => {
                let mut a = [0u8; N];
                a.copy_from_slice(s);
                self.pos += N;
                Ok(a)
            }
            None => Err(Error::Parse(format!(
                "structure file truncated at byte {}, expected {what}",
                self.pos
            ))),
        }
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.bytes::<1>(what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes(what)?))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes(what)?))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes(what)?))
    }

    /// Read a record count and bound it by the bytes still unread, so a
    /// corrupt count fails cleanly instead of over-allocating.
    fn records(&mut self, what: &str, width: usize) -> Result<usize> {
        let n = u64::from_le_bytes(self.bytes(&format!("{what} count"))?);
        let fits = ((self.buf.len() - self.pos) / width) as u64;
        if n > fits {
            return Err(Error::Parse(format!("{what} count {n} exceeds file size")));
        }
        Ok(n as usize)
    }
}

/// Deserialize a structure container; exact inverse of
/// [`write_structure`] for files this build wrote.
pub fn read_structure(bytes: &[u8]) -> Result<Structure<f64>> {
    let mut rd = Reader::new(bytes);
    if rd.bytes::<4>("magic")? != STRUCTURE_MAGIC {
        return Err(Error::Parse("not a structure file (bad magic)".into()));
    }
    let version = rd.u32("format version")?;
    if version != STRUCTURE_FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }

    let n = rd.records("disk", 32)?;
    let mut disks = Vec::with_capacity(n);
    for _ in 0..n {
        let id = rd.u64("disk id")?;
        let x = rd.f64("center x")?;
        let y = rd.f64("center y")?;
        let r = rd.f64("radius")?;
        disks.push(Disk::new(id, Point::new(x, y), r));
    }

    let mut frames = Vec::with_capacity(3);
    for f in Frame::ALL {
        let rot = f.rotation::<f64>();
        let rotated: HashMap<u64, Disk<f64>> = disks
            .iter()
            .map(|d| (d.id, Disk::new(d.id, d.center.rotated(rot), d.radius)))
            .collect();

        let na = rd.records("arc", 24)?;
        let mut arcs = Vec::with_capacity(na);
        for _ in 0..na {
            let id = rd.u64("arc disk id")?;
            let lo = rd.f64("theta_lo")?;
            let hi = rd.f64("theta_hi")?;
            let disk = *rotated
                .get(&id)
                .ok_or_else(|| Error::Parse(format!("arc references unknown disk id {id}")))?;
            arcs.push(Arc { disk, lo, hi });
        }

        let nb = rd.records("boundary", 8)?;
        let mut boundaries = Vec::with_capacity(nb);
        for _ in 0..nb {
            boundaries.push(rd.f64("boundary height")?);
        }

        let nn = rd.records("node", 21)?;
        let mut nodes = Vec::with_capacity(nn);
        for _ in 0..nn {
            let payload = rd.u32("payload")?;
            let left = rd.u32("left link")?;
            let right = rd.u32("right link")?;
            let extra_version = rd.u32("extra version")?;
            let extra_target = rd.u32("extra target")?;
            let extra_right = match rd.u8("extra side flag")? {
                0 => false,
                1 => true,
                other => {
                    return Err(Error::Parse(format!(
                        "extra side flag must be 0 or 1, got {other}"
                    )))
                }
            };
            nodes.push(FrozenNode { payload, left, right, extra_version, extra_target, extra_right });
        }

        let nr = rd.records("root", 4)?;
        let mut roots = Vec::with_capacity(nr);
        for _ in 0..nr {
            roots.push(rd.u32("root link")?);
        }

        let order = PersistentOrder::from_frozen(nodes, roots);
        let map = ArcMap::new(f, arcs.clone());
        frames.push((map, Locator::from_parts(arcs, boundaries, order)));
    }

    if rd.pos != bytes.len() {
        return Err(Error::Parse(format!(
            "{} trailing bytes after structure",
            bytes.len() - rd.pos
        )));
    }
    let mut it = frames.into_iter();
    let frames = [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
    Ok(Structure::from_parts(disks, frames))
}
