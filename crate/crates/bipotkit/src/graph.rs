//! Lattice CSV for `bipotkit graph`.

use std::io::Write;

use bipotkit_core::ExtReal;

use crate::config::LawConfig;
use crate::error::Result;
use crate::suite::sublattice;

pub const HEADER: [&str; 4] = ["x", "y", "member", "gap"];

/// Writes one row per sublattice pair `(s, t)`: the lattice coordinates,
/// membership as 0/1 and the gap (`inf` off the domain).
pub fn write_graph<W: Write>(cfg: &LawConfig, out: W) -> Result<()> {
    let law = cfg.law;
    let grid = sublattice(cfg)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    let mut result = Ok(());
    grid.for_each_point(|p| {
        if result.is_err() {
            return;
        }
        let (x, y) = law.embed(p[0], p[1]);
        let member = if law.member(&x, &y, cfg.tol) { "1" } else { "0" };
        let gap = law.b(&x, &y) - bipotkit_core::duality(&x, &y).expect("same dimension");
        let gap = match gap {
            ExtReal::Finite(g) => g.to_string(),
            ExtReal::PosInf => "inf".to_owned(),
        };
        result = w.write_record([p[0].to_string(), p[1].to_string(), member.to_owned(), gap]);
    });
    result?;
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ConfigFile, LawKind};

    #[test]
    fn elastic_band() {
        let cfg = LawConfig::from_file(ConfigFile { lattice_points: Some(5), ..Default::default() }).unwrap();
        let mut buf = Vec::new();
        write_graph(&cfg, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "x,y,member,gap");
        assert_eq!(lines.len(), 26);
        // lattice -2, -1, 0, 1, 2: member iff y == x
        for line in &lines[1..] {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f[2] == "1", f[0] == f[1], "{line}");
        }
    }

    #[test]
    fn friction_has_infinite_gaps() {
        let file = ConfigFile { law: Some(LawKind::Friction), lattice_points: Some(5), ..Default::default() };
        let mut buf = Vec::new();
        write_graph(&LawConfig::from_file(file).unwrap(), &mut buf).unwrap();
        // y = (1, (t, 0)) leaves K_mu+ for |t| >= 1
        assert!(String::from_utf8(buf).unwrap().contains(",0,inf"));
    }
}
