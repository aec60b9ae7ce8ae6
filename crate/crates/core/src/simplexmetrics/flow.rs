//! Dinic max-flow over an arbitrary exact capacity type.

use std::collections::VecDeque;
use std::ops::{AddAssign, SubAssign};

use num_traits::Zero;

pub trait Capacity:
    Clone + Ord + Zero + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self>
{
}

impl<T> Capacity for T where
    T: Clone + Ord + Zero + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>
{
}

#[derive(Clone, Debug)]
struct FlowArc<C> {
    to: usize,
    rev: usize,
    cap: C,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork<C> {
    graph: Vec<Vec<FlowArc<C>>>,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            graph: (0..n).map(|_| Vec::new()).collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.graph.len()
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: C) {
        let rev_from = self.graph[to].len() + usize::from(from == to);
        let rev_to = self.graph[from].len();
        self.graph[from].push(FlowArc {
            to,
            rev: rev_from,
            cap,
        });
        self.graph[to].push(FlowArc {
            to: from,
            rev: rev_to,
            cap: C::zero(),
        });
    }

    fn bfs(&self, s: usize, level: &mut [Option<usize>]) {
        level.iter_mut().for_each(|l| *l = None);
        level[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let lv = level[v].unwrap_or(0);
            for a in &self.graph[v] {
                if !a.cap.is_zero() && level[a.to].is_none() {
                    level[a.to] = Some(lv + 1);
                    queue.push_back(a.to);
                }
            }
        }
    }

    fn dfs(
        &mut self,
        v: usize,
        t: usize,
        limit: C,
        level: &[Option<usize>],
        iter: &mut [usize],
    ) -> C {
        if v == t {
            return limit;
        }
        while iter[v] < self.graph[v].len() {
            let i = iter[v];
            let (to, cap) = {
                let a = &self.graph[v][i];
                (a.to, a.cap.clone())
            };
            let forward = match (level[v], level[to]) {
                (Some(a), Some(b)) => b == a + 1,
                _ => false,
            };
            if forward && !cap.is_zero() {
                let pushed = self.dfs(to, t, limit.clone().min(cap), level, iter);
                if !pushed.is_zero() {
                    let rev = self.graph[v][i].rev;
                    self.graph[v][i].cap -= &pushed;
                    self.graph[to][rev].cap += &pushed;
                    return pushed;
                }
            }
            iter[v] += 1;
        }
        C::zero()
    }

    /// Maximum `s`-`t` flow. `unbounded` must dominate every augmenting
    /// path, e.g. the total source capacity.
    pub fn max_flow(&mut self, s: usize, t: usize, unbounded: C) -> C {
        let n = self.graph.len();
        let mut flow = C::zero();
        let mut level = vec![None; n];
        loop {
            self.bfs(s, &mut level);
            if level[t].is_none() {
                return flow;
            }
            let mut iter = vec![0; n];
            loop {
                let f = self.dfs(s, t, unbounded.clone(), &level, &mut iter);
                if f.is_zero() {
                    break;
                }
                flow += &f;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn textbook_network() {
        let mut g = FlowNetwork::<i64>::new(6);
        for (u, v, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (1, 2, 10),
            (2, 1, 4),
            (1, 3, 12),
            (3, 2, 9),
            (2, 4, 14),
            (4, 3, 7),
            (3, 5, 20),
            (4, 5, 4),
        ] {
            g.add_edge(u, v, c);
        }
        assert_eq!(g.max_flow(0, 5, 1000), 23);
    }

    #[test]
    fn big_capacities() {
        let mut g = FlowNetwork::<BigInt>::new(4);
        let huge = BigInt::from(1u8) << 200usize;
        g.add_edge(0, 1, huge.clone());
        g.add_edge(0, 2, BigInt::from(5));
        g.add_edge(1, 3, huge.clone() - 1);
        g.add_edge(2, 3, BigInt::from(7));
        assert_eq!(g.max_flow(0, 3, huge.clone() * 2), huge + 4);
    }

    #[test]
    fn disconnected_sink() {
        let mut g = FlowNetwork::<i64>::new(3);
        g.add_edge(0, 1, 5);
        assert_eq!(g.max_flow(0, 2, 100), 0);
    }
}
