//! Line-oriented instance files:
//!
//! ```text
//! # comment
//! nodes <n>
//! arc <id> <origin> <dest> <capacity>
//! demand <id> <volume>
//! route <demand-id> <route-id> <arc-id> <arc-id> ...
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::wpflf::network::{route_endpoints, Demand, Link, NetworkInstance};

pub fn serialize_instance(inst: &NetworkInstance) -> String {
    let mut out = String::new();
    writeln!(out, "nodes {}", inst.node_count()).unwrap();
    for (i, a) in inst.arcs().iter().enumerate() {
        writeln!(out, "arc {i} {} {} {}", a.origin, a.dest, a.capacity).unwrap();
    }
    for (p, d) in inst.demands().iter().enumerate() {
        writeln!(out, "demand {p} {}", d.volume).unwrap();
    }
    for (p, d) in inst.demands().iter().enumerate() {
        for (k, r) in d.routes.iter().enumerate() {
            let arcs: Vec<String> = r.iter().map(usize::to_string).collect();
            writeln!(out, "route {p} {k} {}", arcs.join(" ")).unwrap();
        }
    }
    out
}

pub fn parse_instance(text: &str) -> Result<NetworkInstance> {
    let mut nodes: Option<usize> = None;
    let mut arcs: BTreeMap<usize, (Link, usize)> = BTreeMap::new();
    let mut volumes: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    let mut routes: BTreeMap<(usize, usize), (Vec<usize>, usize)> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tok = content.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        let fields: Vec<&str> = tok.collect();
        match kind {
            "nodes" => {
                expect_len(&fields, 1, line)?;
                if nodes.replace(num(fields[0], line)?).is_some() {
                    return Err(Error::parse(line, "duplicate nodes record"));
                }
            }
            "arc" => {
                expect_len(&fields, 4, line)?;
                let id = num(fields[0], line)?;
                let link = Link {
                    origin: num(fields[1], line)?,
                    dest: num(fields[2], line)?,
                    capacity: num(fields[3], line)?,
                };
                if arcs.insert(id, (link, line)).is_some() {
                    return Err(Error::parse(line, format!("duplicate arc {id}")));
                }
            }
            "demand" => {
                expect_len(&fields, 2, line)?;
                let id = num(fields[0], line)?;
                if volumes.insert(id, (num(fields[1], line)?, line)).is_some() {
                    return Err(Error::parse(line, format!("duplicate demand {id}")));
                }
            }
            "route" => {
                if fields.len() < 3 {
                    return Err(Error::parse(line, "route needs a demand id, a route id and at least one arc"));
                }
                let key = (num(fields[0], line)?, num(fields[1], line)?);
                let path = fields[2..].iter().map(|f| num(f, line)).collect::<Result<Vec<usize>>>()?;
                if routes.insert(key, (path, line)).is_some() {
                    return Err(Error::parse(line, format!("duplicate route {} of demand {}", key.1, key.0)));
                }
            }
            other => return Err(Error::parse(line, format!("unknown record {other:?}"))),
        }
    }

    let n = nodes.ok_or_else(|| Error::parse(0, "missing nodes record"))?;
    let mut links = Vec::with_capacity(arcs.len());
    for (expected, (id, (link, line))) in arcs.into_iter().enumerate() {
        if id != expected {
            return Err(Error::parse(line, format!("arc ids must be 0..m without gaps, found {id}")));
        }
        if link.origin >= n || link.dest >= n {
            return Err(Error::parse(line, format!("arc {id} references a node outside 0..{n}")));
        }
        if link.origin == link.dest || !(link.capacity.is_finite() && link.capacity > 0.0) {
            return Err(Error::parse(line, format!("arc {id} must join distinct nodes with positive capacity")));
        }
        links.push(link);
    }
    let mut demands: Vec<Demand> = Vec::with_capacity(volumes.len());
    let mut demand_lines = Vec::with_capacity(volumes.len());
    for (expected, (id, (volume, line))) in volumes.into_iter().enumerate() {
        if id != expected {
            return Err(Error::parse(line, format!("demand ids must be 0..q without gaps, found {id}")));
        }
        if !(volume.is_finite() && volume >= 0.0) {
            return Err(Error::parse(line, format!("demand {id} has invalid volume")));
        }
        demands.push(Demand {
            volume,
            routes: Vec::new(),
        });
        demand_lines.push(line);
    }
    for ((p, k), (path, line)) in routes {
        let Some(d) = demands.get_mut(p) else {
            return Err(Error::parse(line, format!("route references unknown demand {p}")));
        };
        if k != d.routes.len() {
            return Err(Error::parse(line, format!("route ids of demand {p} must be 0..k without gaps, found {k}")));
        }
        route_endpoints(&links, n, &path).map_err(|m| Error::parse(line, m))?;
        d.routes.push(path);
    }
    for (p, d) in demands.iter().enumerate() {
        if d.routes.is_empty() {
            return Err(Error::parse(demand_lines[p], format!("demand {p} has no route")));
        }
    }
    NetworkInstance::new(n, links, demands)
}

fn expect_len(fields: &[&str], n: usize, line: usize) -> Result<()> {
    if fields.len() == n {
        Ok(())
    } else {
        Err(Error::parse(line, format!("expected {n} fields, found {}", fields.len())))
    }
}

fn num<T: FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::parse(line, format!("bad number {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpflf::generator::{generate_instance, GeneratorConfig};

    #[test]
    fn round_trip_generated_instance() {
        let inst = generate_instance(&GeneratorConfig::mini_c(3)).unwrap();
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn comments_reals_and_order() {
        let text = "# tiny\nnodes 3\n\nroute 0 0 0 1 # two hops\ndemand 0 2.5\narc 1 1 2 4.25\narc 0 0 1 3\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.arcs()[1].capacity, 4.25);
        assert_eq!(inst.demands()[0].volume, 2.5);
        assert_eq!(inst.endpoints(0), (0, 2));
    }

    #[test]
    fn empty_demand_list() {
        let inst = parse_instance("nodes 2\narc 0 0 1 1\n").unwrap();
        assert!(inst.demands().is_empty());
    }

    fn line_of(text: &str) -> usize {
        match parse_instance(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_name_the_line() {
        assert_eq!(line_of("nodes 2\narc 0 0 1 1\ndemand 0 1\nroute 0 0 5\n"), 4);
        assert_eq!(line_of("nodes 2\narc 0 0 3 1\n"), 2);
        assert_eq!(line_of("nodes 2\narc 0 0 1 1\ndemand 0 1\n"), 3);
        assert_eq!(line_of("nodes 2\narc 0 0 1\n"), 2);
        assert_eq!(line_of("nodes 2\nlink 0 0 1 1\n"), 2);
        assert_eq!(line_of("nodes 2\narc 0 0 1 1\nroute 0 0 0\n"), 3);
        assert_eq!(line_of("nodes 2\narc 1 0 1 1\n"), 2);
        assert_eq!(line_of("nodes x\n"), 1);
    }
}
