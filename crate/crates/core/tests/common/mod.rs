#![allow(dead_code)]

use cpnet_core::{ClassSpec, CpNet, Outcome, SwapInstance, Value};

pub type Table = (Vec<usize>, Vec<Option<Vec<Value>>>);

fn row(order: [Value; 2]) -> Option<Vec<Value>> {
    Some(order.to_vec())
}

const FWD: [Value; 2] = [0, 1];
const BWD: [Value; 2] = [1, 0];

/// Outcome from a bit string such as `"010"`.
pub fn out(bits: &str) -> Outcome {
    Outcome::from(bits.bytes().map(|b| b - b'0').collect::<Vec<Value>>())
}

pub fn swap(first: &str, second: &str) -> SwapInstance {
    SwapInstance::new(out(first), out(second)).unwrap()
}

/// A over B over C: `a ≻ ā`; `a: b ≻ b̄`, `ā: b̄ ≻ b`; C prefers `c` iff A and B agree.
pub fn running_example_tables() -> Vec<Table> {
    vec![
        (vec![], vec![row(FWD)]),
        (vec![0], vec![row(FWD), row(BWD)]),
        (vec![0, 1], vec![row(FWD), row(BWD), row(BWD), row(FWD)]),
    ]
}

pub fn running_example() -> CpNet {
    CpNet::from_tables(ClassSpec::complete(3, 2, 2).unwrap(), running_example_tables()).unwrap()
}

/// Cyclic dependency graph B ⇄ C whose induced graph is still acyclic.
pub fn cyclic_consistent() -> CpNet {
    let tables = vec![
        (vec![], vec![row(FWD)]),
        (vec![0, 2], vec![row(FWD), row(FWD), row(BWD), row(FWD)]),
        (vec![0, 1], vec![row(FWD), row(BWD), row(BWD), row(BWD)]),
    ];
    cyclic(tables)
}

/// Cyclic dependency graph B ⇄ C with an improving-flip cycle.
pub fn cyclic_inconsistent() -> CpNet {
    let tables = vec![
        (vec![], vec![row(FWD)]),
        (vec![0, 2], vec![row(FWD), row(FWD), row(BWD), row(FWD)]),
        (vec![1], vec![row(FWD), row(BWD)]),
    ];
    cyclic(tables)
}

fn cyclic(tables: Vec<Table>) -> CpNet {
    let spec = ClassSpec::complete(3, 2, 2).unwrap();
    let cpts = tables
        .into_iter()
        .enumerate()
        .map(|(v, (p, r))| cpnet_core::Cpt::new(v, p, r, 2).unwrap())
        .collect();
    CpNet::new_cyclic(spec, cpts).unwrap()
}

/// A → B, {A, B} → C with `āb̄: c̄ ≻ c` and `c ≻ c̄` otherwise. Maximal in the class.
pub fn full_chain_tables() -> Vec<Table> {
    vec![
        (vec![], vec![row(FWD)]),
        (vec![0], vec![row(FWD), row(BWD)]),
        (vec![0, 1], vec![row(FWD), row(FWD), row(FWD), row(BWD)]),
    ]
}

/// A → B, A → C.
pub fn fork_tables() -> Vec<Table> {
    vec![(vec![], vec![row(FWD)]), (vec![0], vec![row(FWD), row(BWD)]), (vec![0], vec![row(FWD), row(BWD)])]
}

/// A → B with C unconditional.
pub fn single_edge_tables() -> Vec<Table> {
    vec![(vec![], vec![row(FWD)]), (vec![0], vec![row(FWD), row(BWD)]), (vec![], vec![row(FWD)])]
}

pub fn full_chain() -> CpNet {
    CpNet::from_tables(ClassSpec::complete(3, 2, 2).unwrap(), full_chain_tables()).unwrap()
}

pub fn fork() -> CpNet {
    CpNet::from_tables(ClassSpec::complete(3, 2, 2).unwrap(), fork_tables()).unwrap()
}

pub fn single_edge() -> CpNet {
    CpNet::from_tables(ClassSpec::complete(3, 2, 2).unwrap(), single_edge_tables()).unwrap()
}

/// The full chain over A, B, C plus an unconditional D (`d ≻ d̄`), in the 2-bounded class.
pub fn four_variable_tables() -> Vec<Table> {
    let mut t = full_chain_tables();
    t.push((vec![], vec![row(FWD)]));
    t
}

pub fn four_variable_net() -> CpNet {
    CpNet::from_tables(ClassSpec::complete(4, 2, 2).unwrap(), four_variable_tables()).unwrap()
}

/// The (2,3,2)-universal set {000, 101, 011, 110}.
pub fn four_vector_set() -> cpnet_core::universal::UniversalSet {
    cpnet_core::universal::UniversalSet::new(
        2,
        3,
        2,
        vec![vec![0, 0, 0], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]],
    )
    .unwrap()
}

/// Label of `x` computed straight from raw tables: find the row of the swapped variable by
/// reading its parents' values in `x.first()` as a base-`m` number.
pub fn table_label(tables: &[Table], m: usize, x: &SwapInstance) -> bool {
    let v = x.swapped();
    let (parents, rows) = &tables[v];
    let mut idx = 0;
    for &p in parents {
        idx = idx * m + x.first().get(p) as usize;
    }
    let (a, b) = x.swapped_values();
    match &rows[idx] {
        None => false,
        Some(order) => {
            let pa = order.iter().position(|&y| y == a).unwrap();
            let pb = order.iter().position(|&y| y == b).unwrap();
            pa < pb
        }
    }
}

/// Labels of every canonical swap computed by [`table_label`], listed in the order
/// variable, context (lexicographic over the other variables), value pair.
pub fn table_labels(tables: &[Table], n: usize) -> Vec<bool> {
    let mut out = Vec::new();
    for v in 0..n {
        for c in 0..1usize << (n - 1) {
            let mut bits = String::new();
            let mut rest = (0..n - 1).rev().map(|i| (c >> i) & 1);
            for u in 0..n {
                bits.push(if u == v { '0' } else { char::from(b'0' + rest.next().unwrap() as u8) });
            }
            let mut second = bits.clone().into_bytes();
            second[v] = b'1';
            let x = swap(&bits, std::str::from_utf8(&second).unwrap());
            out.push(table_label(tables, 2, &x));
        }
    }
    out
}

/// Number of boolean functions of `s` inputs that depend on every input.
pub fn essential_functions(s: usize) -> u64 {
    let inputs = 1usize << s;
    (0u64..1 << inputs)
        .filter(|&f| {
            (0..s).all(|i| (0..inputs).any(|x| (f >> x & 1) != (f >> (x ^ (1 << i)) & 1)))
        })
        .count() as u64
}

/// Number of complete binary nets with at most `k` parents per variable over `n` labeled
/// variables, counted as Σ over DAGs of the product of per-variable table counts.
pub fn complete_binary_net_count(n: usize, k: usize) -> u64 {
    let mut total = 0;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let indeg: Vec<usize> = (0..n).map(|v| edges.iter().filter(|e| e.1 == v).count()).collect();
        if indeg.iter().any(|&d| d > k) || has_cycle(n, &edges) {
            continue;
        }
        total += indeg.iter().map(|&d| essential_functions(d)).product::<u64>();
    }
    total
}

fn has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0; n];
    for e in edges {
        indeg[e.1] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for e in edges.iter().filter(|e| e.0 == u) {
            indeg[e.1] -= 1;
            if indeg[e.1] == 0 {
                stack.push(e.1);
            }
        }
    }
    seen < n
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Whether two nets of the same spec agree on every swap in both directions.
pub fn same_concept(a: &CpNet, b: &CpNet) -> bool {
    cpnet_core::instance_space(a.spec(), true).iter().all(|x| a.evaluate(x) == b.evaluate(x))
}
