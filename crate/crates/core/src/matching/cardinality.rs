//! Maximum-cardinality matching in general multigraphs (Edmonds' blossom
//! search with union-find blossom bases), started from a greedy matching.

const NIL: usize = usize::MAX;

struct Search<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    link: Vec<usize>,
    // -1 unreached, 0 outer, 1 inner
    label: Vec<i8>,
    base: Vec<usize>,
    mark: Vec<usize>,
    stamp: usize,
    queue: Vec<usize>,
    touched: Vec<usize>,
}

impl Search<'_> {
    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.base[root] != root {
            root = self.base[root];
        }
        while self.base[x] != root {
            let next = self.base[x];
            self.base[x] = root;
            x = next;
        }
        root
    }

    fn touch(&mut self, v: usize) {
        if self.label[v] == -1 {
            self.touched.push(v);
        }
    }

    fn lca(&mut self, mut x: usize, mut y: usize) -> usize {
        self.stamp += 1;
        loop {
            if x != NIL {
                x = self.find(x);
                if self.mark[x] == self.stamp {
                    return x;
                }
                self.mark[x] = self.stamp;
                x = if self.mate[x] == NIL {
                    NIL
                } else {
                    self.link[self.mate[x]]
                };
            }
            std::mem::swap(&mut x, &mut y);
        }
    }

    fn shrink(&mut self, mut x: usize, mut y: usize, l: usize) {
        while self.find(x) != l {
            self.link[x] = y;
            y = self.mate[x];
            if self.label[y] == 1 {
                self.label[y] = 0;
                self.queue.push(y);
            }
            if self.find(x) == x {
                self.base[x] = l;
            }
            if self.find(y) == y {
                self.base[y] = l;
            }
            x = self.link[y];
        }
    }

    fn augment_from(&mut self, root: usize) -> bool {
        for v in self.touched.drain(..) {
            self.label[v] = -1;
            self.base[v] = v;
            self.link[v] = NIL;
        }
        self.queue.clear();
        self.touched.push(root);
        self.label[root] = 0;
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            for i in 0..self.adj[x].len() {
                let y = self.adj[x][i];
                if self.label[y] == -1 {
                    self.touch(y);
                    self.label[y] = 1;
                    self.link[y] = x;
                    if self.mate[y] == NIL {
                        let mut y = y;
                        while y != NIL {
                            let z = self.link[y];
                            let w = self.mate[z];
                            self.mate[y] = z;
                            self.mate[z] = y;
                            y = w;
                        }
                        return true;
                    }
                    let m = self.mate[y];
                    self.touch(m);
                    self.label[m] = 0;
                    self.queue.push(m);
                } else if self.label[y] == 0 && self.find(x) != self.find(y) {
                    let l = self.lca(x, y);
                    self.shrink(x, y, l);
                    self.shrink(y, x, l);
                }
            }
        }
        false
    }
}

/// Returns `mate` (NIL-free iff the matching is perfect) for the multigraph
/// given by neighbour lists. Stops at the first vertex that no augmenting
/// path reaches when `stop_on_failure` is set.
pub(crate) fn maximum_matching(adj: &[Vec<usize>], stop_on_failure: bool) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut s = Search {
        adj,
        mate: vec![NIL; n],
        link: vec![NIL; n],
        label: vec![-1; n],
        base: (0..n).collect(),
        mark: vec![0; n],
        stamp: 0,
        queue: Vec::new(),
        touched: Vec::new(),
    };
    for v in 0..n {
        if s.mate[v] == NIL {
            if let Some(&w) = adj[v].iter().filter(|&&w| s.mate[w] == NIL && w != v).min() {
                s.mate[v] = w;
                s.mate[w] = v;
            }
        }
    }
    for v in 0..n {
        if s.mate[v] == NIL && !s.augment_from(v) && stop_on_failure {
            break;
        }
    }
    s.mate
        .into_iter()
        .map(|m| (m != NIL).then_some(m))
        .collect()
}
