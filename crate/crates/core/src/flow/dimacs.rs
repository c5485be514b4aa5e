//! DIMACS `min` format dump/load, for cross-checking with external solvers.

use std::fmt::Write;

use super::{Capacity, FlowArc, FlowError, FlowNetwork, NodeId};

/// Renders `network` in DIMACS min-cost-flow format (1-based node ids).
/// Unbounded arcs are written with the total supply as capacity.
pub fn to_dimacs(network: &FlowNetwork) -> String {
    let supply = network.total_supply();
    let mut out = String::new();
    let _ = writeln!(out, "c panelfuse flow network");
    let _ = writeln!(out, "p min {} {}", network.node_count(), network.arc_count());
    for (v, &b) in network.balances().iter().enumerate() {
        if b != 0 {
            let _ = writeln!(out, "n {} {}", v + 1, b);
        }
    }
    for arc in network.arcs() {
        let _ = writeln!(
            out,
            "a {} {} {} {} {}",
            arc.from.0 + 1,
            arc.to.0 + 1,
            arc.lower,
            arc.upper.resolve(supply),
            arc.cost
        );
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<FlowNetwork, FlowError> {
    let mut net: Option<FlowNetwork> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: &str| FlowError::Dimacs {
            line,
            message: message.to_string(),
        };
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        let nums: Result<Vec<i64>, _> = tok.map(str::parse::<i64>).collect();
        match kind {
            "c" => continue,
            "p" => {
                let rest: Vec<&str> = raw.split_whitespace().skip(1).collect();
                if rest.len() != 3 || rest[0] != "min" {
                    return Err(err("expected `p min <nodes> <arcs>`"));
                }
                let n: usize = rest[1].parse().map_err(|_| err("bad node count"))?;
                let m: usize = rest[2].parse().map_err(|_| err("bad arc count"))?;
                let mut fresh = FlowNetwork::with_capacity(n, m);
                for _ in 0..n {
                    fresh.add_node(0);
                }
                net = Some(fresh);
            }
            "n" | "a" => {
                let g = net.as_mut().ok_or_else(|| err("descriptor before problem line"))?;
                let nums = nums.map_err(|_| err("non-integer field"))?;
                let node = |id: i64| -> Result<NodeId, FlowError> {
                    if id < 1 || id as usize > g.node_count() {
                        Err(err("node id out of range"))
                    } else {
                        Ok(NodeId(id as usize - 1))
                    }
                };
                if kind == "n" {
                    let [id, b] = nums[..] else {
                        return Err(err("expected `n <id> <flow>`"));
                    };
                    let v = node(id)?;
                    g.set_balance(v, b);
                } else {
                    let [from, to, lower, upper, cost] = nums[..] else {
                        return Err(err("expected `a <from> <to> <low> <cap> <cost>`"));
                    };
                    let (from, to) = (node(from)?, node(to)?);
                    g.push_arc(FlowArc {
                        from,
                        to,
                        cost,
                        lower,
                        upper: Capacity::Finite(upper),
                    });
                }
            }
            _ => return Err(err("unknown line type")),
        }
    }
    net.ok_or(FlowError::Dimacs {
        line: 0,
        message: "missing problem line".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::solve_mcf;

    #[test]
    fn dump_shape() {
        let mut net = FlowNetwork::new();
        let u = net.add_node(5);
        let v = net.add_node(-5);
        net.add_arc(u, v, 3, Capacity::Unbounded);
        let text = to_dimacs(&net);
        assert!(text.contains("p min 2 1\n"));
        assert!(text.contains("n 1 5\n"));
        assert!(text.contains("n 2 -5\n"));
        assert!(text.contains("a 1 2 0 5 3\n"));
        let back = parse_dimacs(&text).unwrap();
        assert_eq!(solve_mcf(&back).unwrap().total_cost, 15);
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = parse_dimacs("p min 2 1\na 1 9 0 1 1\n").unwrap_err();
        assert_eq!(
            err,
            FlowError::Dimacs {
                line: 2,
                message: "node id out of range".into()
            }
        );
        assert!(parse_dimacs("c nothing\n").is_err());
    }
}
