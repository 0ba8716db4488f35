use std::collections::BTreeMap;

use super::{InstanceError, LabeledInstance, Role};
use crate::graph::{Digraph, VertexId};

fn check_kq(k: usize, q: usize, sigma_len: usize) -> Result<(), InstanceError> {
    if k == 0 {
        return Err(InstanceError::ZeroParameter { name: "k" });
    }
    if q == 0 {
        return Err(InstanceError::ZeroParameter { name: "q" });
    }
    if sigma_len != k {
        return Err(InstanceError::SigmaLength { k, got: sigma_len });
    }
    Ok(())
}

/// Id of `v_j^i` when path vertices start at `base`.
fn grid_id(base: usize, q: usize, path: usize, index: usize) -> VertexId {
    base + (path - 1) * q + (index - 1)
}

fn grid_roles(k: usize, q: usize) -> impl Iterator<Item = Role> {
    (1..=k).flat_map(move |path| (1..=q).map(move |index| Role::PathVertex { path, index }))
}

/// `k` directed paths of `q` vertices; `s → v_1^i` iff `σ(i) = 1`; every
/// vertex other than `u` points to `u`.
pub fn gen_f(k: usize, q: usize, sigma: &[bool]) -> Result<LabeledInstance, InstanceError> {
    check_kq(k, q, sigma.len())?;
    let (s, u) = (0, k * q + 1);
    let mut edges = Vec::new();
    for path in 1..=k {
        for j in 1..q {
            edges.push((grid_id(1, q, path, j), grid_id(1, q, path, j + 1)));
        }
        if sigma[path - 1] {
            edges.push((s, grid_id(1, q, path, 1)));
        }
    }
    edges.extend((0..u).map(|x| (x, u)));
    let roles = std::iter::once(Role::Source).chain(grid_roles(k, q)).chain([Role::Sink]).collect();
    Ok(LabeledInstance {
        graph: Digraph::new(k * q + 2, edges).expect("family F construction is a simple digraph"),
        roles,
        source: s,
    })
}

/// The exact set reachable from `s` in `gen_f(k, q, σ)`, ascending.
pub fn expected_reach_f(k: usize, q: usize, sigma: &[bool]) -> Result<Vec<VertexId>, InstanceError> {
    check_kq(k, q, sigma.len())?;
    let mut set = vec![0];
    for path in (1..=k).filter(|&i| sigma[i - 1]) {
        set.extend((1..=q).map(|j| grid_id(1, q, path, j)));
    }
    set.push(k * q + 1);
    Ok(set)
}

/// `gen_f` with `s` removed and, for every `σ(i) = 1`, the edge `v_1^i → u`
/// reversed. `u` becomes the source.
pub fn gen_fprime(k: usize, q: usize, sigma: &[bool]) -> Result<LabeledInstance, InstanceError> {
    check_kq(k, q, sigma.len())?;
    let u = k * q;
    let mut edges = Vec::new();
    for path in 1..=k {
        for j in 1..q {
            edges.push((grid_id(0, q, path, j), grid_id(0, q, path, j + 1)));
        }
        for j in 1..=q {
            let v = grid_id(0, q, path, j);
            edges.push(if j == 1 && sigma[path - 1] { (u, v) } else { (v, u) });
        }
    }
    Ok(LabeledInstance {
        graph: Digraph::new(k * q + 1, edges).expect("family F' construction is a simple digraph"),
        roles: grid_roles(k, q).chain([Role::Sink]).collect(),
        source: u,
    })
}

/// The exact set reachable from `u` in `gen_fprime(k, q, σ)`, ascending.
pub fn expected_reach_fprime(k: usize, q: usize, sigma: &[bool]) -> Result<Vec<VertexId>, InstanceError> {
    check_kq(k, q, sigma.len())?;
    let mut set: Vec<VertexId> =
        (1..=k).filter(|&i| sigma[i - 1]).flat_map(|path| (1..=q).map(move |j| grid_id(0, q, path, j))).collect();
    set.push(k * q);
    Ok(set)
}

fn check_j(k: usize, sigma: &[usize]) -> Result<(), InstanceError> {
    if k == 0 {
        return Err(InstanceError::ZeroParameter { name: "k" });
    }
    if sigma.len() != k {
        return Err(InstanceError::SigmaLength { k, got: sigma.len() });
    }
    if let Some((index, &value)) = sigma.iter().enumerate().find(|(_, &v)| v == 0 || v > k) {
        return Err(InstanceError::SigmaOutOfRange { index, value, k });
    }
    Ok(())
}

/// Role of the vertex at 1-based `position` on path `path` of a `J` instance.
fn j_role(sigma_i: usize, path: usize, position: usize) -> Role {
    if position == 1 {
        Role::PathHead { path }
    } else if position > sigma_i {
        Role::PathVertex { path, index: position - sigma_i }
    } else {
        Role::PathInner { path, position }
    }
}

/// `k` directed paths, path `i` with `σ(i) + k` vertices, all entered from
/// `s` at their head `u^i`; every vertex other than `u` points to `u`. The
/// last `k` vertices of path `i` are `v_1^i, …, v_k^i`.
pub fn gen_j(k: usize, sigma: &[usize]) -> Result<LabeledInstance, InstanceError> {
    check_j(k, sigma)?;
    let mut roles = vec![Role::Source];
    let mut edges = Vec::new();
    let mut next_id = 1;
    for (i, &sigma_i) in sigma.iter().enumerate() {
        let path = i + 1;
        let len = sigma_i + k;
        edges.push((0, next_id));
        for position in 1..=len {
            roles.push(j_role(sigma_i, path, position));
            if position < len {
                edges.push((next_id + position - 1, next_id + position));
            }
        }
        next_id += len;
    }
    let u = next_id;
    roles.push(Role::Sink);
    edges.extend((0..u).map(|x| (x, u)));
    Ok(LabeledInstance {
        graph: Digraph::new(u + 1, edges).expect("family J construction is a simple digraph"),
        roles,
        source: 0,
    })
}

/// Distance from `s` of every named vertex of `gen_j(k, σ)`: `u` and every
/// head at 1, `v_j^i` at `σ(i) + j`, inner vertices at their position.
pub fn expected_dist_j(k: usize, sigma: &[usize]) -> Result<BTreeMap<Role, usize>, InstanceError> {
    check_j(k, sigma)?;
    let mut dist = BTreeMap::from([(Role::Source, 0), (Role::Sink, 1)]);
    for (i, &sigma_i) in sigma.iter().enumerate() {
        let path = i + 1;
        dist.insert(Role::PathHead { path }, 1);
        for position in 2..=sigma_i {
            dist.insert(Role::PathInner { path, position }, position);
        }
        for index in 1..=k {
            dist.insert(Role::PathVertex { path, index }, sigma_i + index);
        }
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_distances, reach_oracle, Distance};

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn f_k3_q5_instance() {
        let inst = gen_f(3, 5, &bits("101")).unwrap();
        assert_eq!(inst.graph.n(), 17);
        let u = 16;
        let s_out: Vec<_> = inst.graph.out_neighbors(0).iter().copied().filter(|&v| v != u).collect();
        let v11 = inst.vertex_of(Role::PathVertex { path: 1, index: 1 }).unwrap();
        let v13 = inst.vertex_of(Role::PathVertex { path: 3, index: 1 }).unwrap();
        assert_eq!(s_out, vec![v11, v13]);
        assert_eq!(inst.graph.underlying_diameter(), Distance::Finite(2));
        let v51 = inst.vertex_of(Role::PathVertex { path: 1, index: 5 }).unwrap();
        assert!(!inst.graph.has_edge(v11, v51) && !inst.graph.has_edge(v51, v11));
        assert_eq!(expected_reach_f(3, 5, &bits("101")).unwrap().len(), 12);
        assert_eq!(reach_oracle(&inst.graph).reachable_from(0), expected_reach_f(3, 5, &bits("101")).unwrap());
    }

    #[test]
    fn smallest_f_instance() {
        let inst = gen_f(1, 1, &[true]).unwrap();
        assert_eq!(inst.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn all_zero_sigma_reaches_only_sink() {
        let inst = gen_f(2, 2, &bits("00")).unwrap();
        assert_eq!(inst.graph.out_neighbors(0), &[inst.graph.n() - 1]);
        assert_eq!(reach_oracle(&inst.graph).reachable_from(0), vec![0, 5]);
        assert_eq!(expected_reach_f(2, 2, &bits("00")).unwrap(), vec![0, 5]);
        assert_eq!(expected_reach_f(2, 2, &bits("11")).unwrap(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn parameter_errors() {
        assert_eq!(gen_f(0, 1, &[]), Err(InstanceError::ZeroParameter { name: "k" }));
        assert_eq!(gen_f(2, 0, &[true, true]), Err(InstanceError::ZeroParameter { name: "q" }));
        assert_eq!(gen_fprime(2, 1, &[true]), Err(InstanceError::SigmaLength { k: 2, got: 1 }));
        assert_eq!(gen_j(2, &[1, 3]), Err(InstanceError::SigmaOutOfRange { index: 1, value: 3, k: 2 }));
        assert_eq!(gen_j(2, &[0, 1]), Err(InstanceError::SigmaOutOfRange { index: 0, value: 0, k: 2 }));
    }

    #[test]
    fn j_k2_instance() {
        let inst = gen_j(2, &[1, 2]).unwrap();
        assert_eq!(inst.graph.n(), 9);
        let on_path = |p: usize| {
            inst.roles
                .iter()
                .filter(|r| matches!(r, Role::PathHead { path } | Role::PathVertex { path, .. } | Role::PathInner { path, .. } if *path == p))
                .count()
        };
        assert_eq!((on_path(1), on_path(2)), (3, 4));
        let dist = bfs_distances(&inst.graph, 0);
        let at = |role| dist[inst.vertex_of(role).unwrap()];
        assert_eq!(at(Role::PathVertex { path: 1, index: 2 }), Distance::Finite(3));
        assert_eq!(at(Role::PathVertex { path: 2, index: 2 }), Distance::Finite(4));
        assert_eq!(at(Role::Sink), Distance::Finite(1));
        assert_eq!(inst.graph.underlying_diameter(), Distance::Finite(2));
    }

    #[test]
    fn j_distances_follow_sigma() {
        let inst = gen_j(1, &[1]).unwrap();
        assert_eq!(inst.graph.n(), 4);
        let v = inst.vertex_of(Role::PathVertex { path: 1, index: 1 }).unwrap();
        assert_eq!(bfs_distances(&inst.graph, 0)[v], Distance::Finite(2));
        let expected = expected_dist_j(2, &[2, 2]).unwrap();
        assert_eq!(expected[&Role::PathVertex { path: 1, index: 2 }], 4);
        assert_eq!(expected[&Role::PathVertex { path: 2, index: 2 }], 4);
        assert_eq!(expected[&Role::Sink], 1);
        let inst = gen_j(2, &[2, 2]).unwrap();
        let dist = bfs_distances(&inst.graph, 0);
        for (v, role) in inst.roles.iter().enumerate() {
            assert_eq!(dist[v], Distance::Finite(expected[role]), "{role}");
        }
    }

    #[test]
    fn fprime_k3_q3_instance() {
        let inst = gen_fprime(3, 3, &bits("101")).unwrap();
        assert_eq!(inst.graph.n(), 10);
        assert_eq!(inst.source, 9);
        assert!(!inst.roles.contains(&Role::Source));
        let heads = [1, 3].map(|path| inst.vertex_of(Role::PathVertex { path, index: 1 }).unwrap());
        assert_eq!(inst.graph.out_neighbors(9), &heads);
        assert_eq!(reach_oracle(&inst.graph).reachable_from(9), expected_reach_fprime(3, 3, &bits("101")).unwrap());
        let sinkless = gen_fprime(3, 3, &bits("000")).unwrap();
        assert_eq!(sinkless.graph.out_degree(9), 0);
        assert_eq!(reach_oracle(&sinkless.graph).reachable_from(9), vec![9]);
    }
}
