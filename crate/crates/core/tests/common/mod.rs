//! Instance generators shared by the integration tests.
#![allow(dead_code)]

use panelfuse_core::flow::{Capacity, FlowNetwork, NodeId};
use panelfuse_core::panel::{Panel, PanelSchema, Panelist};
use rand::Rng;

/// Random side sizes with balances in `1..=max_balance` adjusted until both
/// sides carry the same total.
pub fn balanced_sides<R: Rng>(rng: &mut R, max_side: usize, max_balance: i64) -> (Vec<i64>, Vec<i64>) {
    let mut supply: Vec<i64> = (0..rng.random_range(1..=max_side))
        .map(|_| rng.random_range(1..=max_balance))
        .collect();
    let mut demand: Vec<i64> = (0..rng.random_range(1..=max_side))
        .map(|_| rng.random_range(1..=max_balance))
        .collect();
    let mut i = 0;
    loop {
        let (s, d): (i64, i64) = (supply.iter().sum(), demand.iter().sum());
        if s == d {
            break;
        }
        let (small, big) = if s < d {
            (&mut supply, &mut demand)
        } else {
            (&mut demand, &mut supply)
        };
        let k = i % small.len();
        if small[k] < max_balance {
            small[k] += 1;
        } else if let Some(b) = big.iter_mut().find(|b| **b > 1) {
            *b -= 1;
        } else {
            // every big entry is 1 and its length exceeds the small total
            big.pop();
        }
        i += 1;
    }
    (supply, demand)
}

/// A transportation instance: supply nodes first, then demand nodes. Each
/// arc is present with probability `density`.
pub fn transport<R: Rng>(rng: &mut R, max_side: usize, max_balance: i64, max_cost: i64, density: f64) -> FlowNetwork {
    let (supply, demand) = balanced_sides(rng, max_side, max_balance);
    let mut n = FlowNetwork::new();
    for &s in &supply {
        n.add_node(s);
    }
    for &d in &demand {
        n.add_node(-d);
    }
    for i in 0..supply.len() {
        for j in 0..demand.len() {
            if rng.random_bool(density) {
                let c = rng.random_range(0..=max_cost);
                n.add_arc(NodeId(i), NodeId(supply.len() + j), c, Capacity::Unbounded);
            }
        }
    }
    n
}

pub fn schema(ncat: usize, nreal: usize) -> PanelSchema {
    PanelSchema {
        categorical: (0..ncat).map(|k| format!("c{k}")).collect(),
        real: (0..nreal).map(|k| format!("x{k}")).collect(),
    }
}

/// A quantized panel with `unit_scale` 1; weight equals units.
pub fn quantized(schema: &PanelSchema, rows: Vec<(String, i64, Vec<String>, Vec<f64>)>) -> Panel {
    let people = rows
        .into_iter()
        .map(|(id, units, categorical, real)| Panelist {
            id,
            weight: units as f64,
            units,
            categorical,
            real,
        })
        .collect();
    let mut p = Panel::new(schema.clone(), people).unwrap();
    p.unit_scale = Some(1);
    p
}

fn rows<R: Rng>(
    rng: &mut R,
    prefix: &str,
    units: &[i64],
    cats: impl Fn(&mut R, usize) -> Vec<String>,
    nreal: usize,
) -> Vec<(String, i64, Vec<String>, Vec<f64>)> {
    units
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let c = cats(rng, i);
            let r = (0..nreal).map(|_| rng.random_range(0.0..1.0)).collect();
            (format!("{prefix}{i:02}"), u, c, r)
        })
        .collect()
}

/// Unit panels with equal totals and random categoricals (levels `A`, `B`,
/// ...) and reals already in [0, 1].
pub fn random_panels<R: Rng>(
    rng: &mut R,
    max_side: usize,
    max_units: i64,
    ncat: usize,
    levels: usize,
    nreal: usize,
) -> (Panel, Panel) {
    let (lu, ru) = balanced_sides(rng, max_side, max_units);
    let cats = |rng: &mut R, _| {
        (0..ncat)
            .map(|_| ((b'A' + rng.random_range(0..levels) as u8) as char).to_string())
            .collect()
    };
    let s = schema(ncat, nreal);
    let l = quantized(&s, rows(rng, "u", &lu, cats, nreal));
    let r = quantized(&s, rows(rng, "v", &ru, cats, nreal));
    (l, r)
}

/// Panels where every value of the single categorical `c0` carries the same
/// units on both sides.
pub fn balanced_blocks<R: Rng>(rng: &mut R, max_side: usize, nreal: usize) -> (Panel, Panel) {
    let blocks = rng.random_range(1..=3usize);
    let per_block = (max_side / blocks).max(1);
    let (mut lrows, mut rrows) = (Vec::new(), Vec::new());
    for b in 0..blocks {
        let (lu, ru) = balanced_sides(rng, per_block, 6);
        let key = vec![format!("B{b}")];
        let offset_l = lrows.len();
        let offset_r = rrows.len();
        for (i, u) in lu.into_iter().enumerate() {
            let r = (0..nreal).map(|_| rng.random_range(0.0..1.0)).collect();
            lrows.push((format!("u{:02}", offset_l + i), u, key.clone(), r));
        }
        for (j, u) in ru.into_iter().enumerate() {
            let r = (0..nreal).map(|_| rng.random_range(0.0..1.0)).collect();
            rrows.push((format!("v{:02}", offset_r + j), u, key.clone(), r));
        }
    }
    let s = schema(1, nreal);
    (quantized(&s, lrows), quantized(&s, rrows))
}
