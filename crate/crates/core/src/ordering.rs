//! Greedy minimum-degree ordering on a quotient graph.
//!
//! Eliminated vertices become elements; a variable's degree is the size of
//! its reach through adjacent variables and elements (exact external degree).
//! Ties go to the smallest original index, so the ordering is deterministic.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::{Permutation, SymmetricSparseMatrix};

pub fn minimum_degree(a: &SymmetricSparseMatrix) -> Permutation {
    let n = a.n();
    let mut adj_vars: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j, _) in a.iter() {
        if i != j {
            adj_vars[i].push(j);
            adj_vars[j].push(i);
        }
    }
    for list in adj_vars.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let mut adj_elems: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut elem_vars: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut eliminated = vec![false; n];
    let mut degree: Vec<usize> = adj_vars.iter().map(Vec::len).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (degree[v], v)).collect();

    let mut mark = vec![0usize; n];
    let mut stamp = 0usize;
    let mut order = Vec::with_capacity(n);

    while let Some((_, v)) = queue.pop_first() {
        eliminated[v] = true;
        order.push(v);

        // reach of v becomes the variable set of the new element v
        stamp += 1;
        mark[v] = stamp;
        let mut reach = Vec::new();
        for &u in &adj_vars[v] {
            if !eliminated[u] && mark[u] != stamp {
                mark[u] = stamp;
                reach.push(u);
            }
        }
        let mut absorbed = core::mem::take(&mut adj_elems[v]);
        absorbed.sort_unstable();
        for &e in &absorbed {
            for &u in &elem_vars[e] {
                if !eliminated[u] && mark[u] != stamp {
                    mark[u] = stamp;
                    reach.push(u);
                }
            }
        }
        reach.sort_unstable();
        adj_vars[v].clear();

        for &u in &reach {
            // variables covered by the new element no longer need explicit edges
            adj_vars[u].retain(|&w| !eliminated[w] && mark[w] != stamp);
            adj_elems[u].retain(|e| absorbed.binary_search(e).is_err());
            adj_elems[u].push(v);
        }
        for &e in &absorbed {
            elem_vars[e].clear();
        }
        elem_vars[v] = reach.clone();

        for &u in &reach {
            stamp += 1;
            mark[u] = stamp;
            let mut d = 0;
            for &w in &adj_vars[u] {
                if mark[w] != stamp {
                    mark[w] = stamp;
                    d += 1;
                }
            }
            for &e in &adj_elems[u] {
                for &w in &elem_vars[e] {
                    if !eliminated[w] && mark[w] != stamp {
                        mark[w] = stamp;
                        d += 1;
                    }
                }
            }
            if d != degree[u] {
                queue.remove(&(degree[u], u));
                degree[u] = d;
                queue.insert((d, u));
            }
        }
    }
    Permutation::from_new_to_old(order).expect("elimination order visits every vertex once")
}
