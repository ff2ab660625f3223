//! Plain-text Hasse diagrams: a header `n m`, then `m` lines `i j` meaning `i ⋖ j`.

use std::io::{BufRead, Write};

use super::{Poset, PosetError};

pub fn write_hasse<T, W: Write>(poset: &Poset<T>, mut w: W) -> std::io::Result<()> {
    let pairs = poset.cover_pairs();
    writeln!(w, "{} {}", poset.len(), pairs.len())?;
    for (i, j) in pairs {
        writeln!(w, "{i} {j}")?;
    }
    Ok(())
}

pub fn read_hasse<R: BufRead>(r: R) -> Result<Poset<usize>, PosetError> {
    let mut lines = r
        .lines()
        .map(|l| l.map_err(|e| PosetError::Malformed(e.to_string())))
        .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty() && !s.trim_start().starts_with('#')));
    let header = lines.next().ok_or_else(|| PosetError::Malformed("missing header".into()))??;
    let [n, m] = parse_pair(&header)?;
    let mut covers = Vec::with_capacity(m);
    for line in lines {
        covers.push(parse_pair(&line?).map(|[i, j]| (i, j))?);
    }
    if covers.len() != m {
        return Err(PosetError::Malformed(format!("expected {m} covers, found {}", covers.len())));
    }
    let poset = Poset::from_covers((0..n).collect(), &covers)?;
    if poset.cover_count() != m {
        return Err(PosetError::Malformed("listed pairs are not exactly the cover relation".into()));
    }
    Ok(poset)
}

fn parse_pair(line: &str) -> Result<[usize; 2], PosetError> {
    let bad = || PosetError::Malformed(format!("expected two integers, got {line:?}"));
    let mut it = line.split_whitespace().map(|t| t.parse::<usize>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok([a, b]),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn round_trip() {
        let p = divisor_lattice(12);
        let mut buf = Vec::new();
        write_hasse(&p, &mut buf).unwrap();
        let q = read_hasse(&buf[..]).unwrap();
        assert_eq!(q.cover_pairs(), p.cover_pairs());
        assert!(read_hasse(&b"3 1\n0 1\n0 x\n"[..]).is_err());
        assert!(read_hasse(&b"3 2\n0 1\n1 2\n"[..]).is_ok());
        // a non-cover pair is rejected
        assert!(read_hasse(&b"3 3\n0 1\n1 2\n0 2\n"[..]).is_err());
    }
}
