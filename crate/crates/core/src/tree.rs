//! Unrooted trees, the edge-list text format, and rooted views.

use std::fmt;

use thiserror::Error;

/// Vertex index, always 0-based.
pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid tree: {0}")]
    Structure(String),
    #[error("vertex {vertex} out of range for a tree on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
}

/// An unrooted tree on `n` vertices.
///
/// Construction always validates: exactly `n - 1` edges, no loops or
/// repeated edges, and connectivity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl Tree {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Structure("a tree needs at least one vertex".into()));
        }
        if edges.len() != n - 1 {
            return Err(TreeError::Structure(format!("expected {} edges, found {}", n - 1, edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= n {
                    return Err(TreeError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(TreeError::Structure(format!("self-loop at vertex {u}")));
            }
            if adj[u].contains(&v) {
                return Err(TreeError::Structure(format!("duplicate edge {u} {v}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }

        // n - 1 edges plus connectivity rules out cycles.
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != n {
            return Err(TreeError::Structure(format!(
                "graph is disconnected (reached {reached} of {n} vertices from vertex 0)"
            )));
        }

        Ok(Tree { n, edges, adj })
    }

    /// Builds a tree from a parent array where exactly one entry is `None`.
    pub fn from_parents(parents: &[Option<Vertex>]) -> Result<Self, TreeError> {
        let edges = parents.iter().enumerate().filter_map(|(v, p)| p.map(|p| (p, v))).collect();
        Tree::new(parents.len(), edges)
    }

    pub fn single_vertex() -> Self {
        Tree { n: 1, edges: Vec::new(), adj: vec![Vec::new()] }
    }

    pub fn path(n: usize) -> Self {
        assert!(n >= 1);
        Tree::new(n, (1..n).map(|v| (v - 1, v)).collect()).expect("path is a tree")
    }

    /// Star with center 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Self {
        assert!(n >= 1);
        Tree::new(n, (1..n).map(|v| (0, v)).collect()).expect("star is a tree")
    }

    /// Caterpillar: a spine of `spine` vertices, each carrying `legs` leaves.
    pub fn caterpillar(spine: usize, legs: usize) -> Self {
        assert!(spine >= 1);
        let mut edges: Vec<(Vertex, Vertex)> = (1..spine).map(|v| (v - 1, v)).collect();
        let mut next = spine;
        for s in 0..spine {
            for _ in 0..legs {
                edges.push((s, next));
                next += 1;
            }
        }
        Tree::new(next, edges).expect("caterpillar is a tree")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Applies a vertex relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self, TreeError> {
        if perm.len() != self.n {
            return Err(TreeError::Structure("permutation length differs from n".into()));
        }
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Tree::new(self.n, edges)
    }

    /// Parses the edge-list document: `n` on the first line, then `n - 1`
    /// lines of `u v`.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, first) = lines.next().ok_or(TreeError::Parse { line: 1, msg: "empty document".into() })?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| TreeError::Parse { line: 1, msg: format!("expected vertex count, found {first:?}") })?;
        if n == 0 {
            return Err(TreeError::Parse { line: 1, msg: "vertex count must be positive".into() });
        }

        let mut edges = Vec::with_capacity(n - 1);
        for (line, raw) in lines {
            if raw.trim().is_empty() {
                continue;
            }
            let mut fields = raw.split_whitespace();
            let mut vertex = || -> Result<Vertex, TreeError> {
                let field = fields
                    .next()
                    .ok_or_else(|| TreeError::Parse { line, msg: format!("expected \"u v\", found {raw:?}") })?;
                let v: Vertex =
                    field.parse().map_err(|_| TreeError::Parse { line, msg: format!("invalid vertex {field:?}") })?;
                if v >= n {
                    return Err(TreeError::Parse { line, msg: format!("vertex {v} out of range [0, {n})") });
                }
                Ok(v)
            };
            let u = vertex()?;
            let v = vertex()?;
            if fields.next().is_some() {
                return Err(TreeError::Parse { line, msg: format!("trailing data in {raw:?}") });
            }
            if edges.len() == n - 1 {
                return Err(TreeError::Parse { line, msg: format!("more than {} edges", n - 1) });
            }
            edges.push((u, v));
        }
        Tree::new(n, edges)
    }

    /// Serializes to the edge-list format (LF line endings, trailing LF).
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Number of vertices in each component after deleting the edges not
    /// selected by `keep`. Used by the subset-expansion oracle.
    pub(crate) fn component_sizes(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut dsu = Dsu::new(self.n);
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if keep(i) {
                dsu.union(u, v);
            }
        }
        let mut sizes = Vec::new();
        for v in 0..self.n {
            if dsu.find(v) == v {
                sizes.push(dsu.size[v]);
            }
        }
        sizes
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree(n={}, edges={:?})", self.n, self.edges)
    }
}

struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// A tree with a distinguished root. Children are kept in ascending vertex
/// order, which fixes the order in which recursions visit subtrees.
#[derive(Clone, Debug)]
pub struct RootedView<'a> {
    tree: &'a Tree,
    root: Vertex,
    parent: Vec<Option<Vertex>>,
    children: Vec<Vec<Vertex>>,
    preorder: Vec<Vertex>,
    subtree_size: Vec<usize>,
}

impl<'a> RootedView<'a> {
    pub fn tree(&self) -> &'a Tree {
        self.tree
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    /// Parent of `v`, `None` for the root.
    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<Vertex>] {
        &self.parent
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    /// Vertices in preorder; every parent precedes its children.
    pub fn preorder(&self) -> &[Vertex] {
        &self.preorder
    }

    pub fn subtree_size(&self, v: Vertex) -> usize {
        self.subtree_size[v]
    }

    /// Vertex set of the subtree hanging from `v` (including `v`), in preorder.
    pub fn subtree_vertices(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.subtree_size[v]);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    /// Components left after deleting each edge `{v, child}`, one per child
    /// of `v`, each paired with the child it contains.
    pub fn child_subtrees(&self, v: Vertex) -> Vec<(Vertex, Vec<Vertex>)> {
        self.children[v].iter().map(|&c| (c, self.subtree_vertices(c))).collect()
    }
}

/// Roots `t` at `v`.
pub fn root_at(t: &Tree, v: Vertex) -> Result<RootedView<'_>, TreeError> {
    let n = t.vertex_count();
    if v >= n {
        return Err(TreeError::VertexOutOfRange { vertex: v, n });
    }
    let mut parent = vec![None; n];
    let mut children = vec![Vec::new(); n];
    let mut preorder = Vec::with_capacity(n);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        preorder.push(u);
        for &w in t.neighbors(u) {
            if Some(w) != parent[u] {
                parent[w] = Some(u);
                children[u].push(w);
            }
        }
        // Reverse push so the smallest child is visited first.
        stack.extend(children[u].iter().rev());
    }
    let mut subtree_size = vec![1; n];
    for &u in preorder.iter().rev() {
        if let Some(p) = parent[u] {
            subtree_size[p] += subtree_size[u];
        }
    }
    Ok(RootedView { tree: t, root: v, parent, children, preorder, subtree_size })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_vertex() {
        let t = Tree::parse("1\n").unwrap();
        assert_eq!(t.vertex_count(), 1);
        assert!(t.edges().is_empty());
    }

    #[test]
    fn parse_path_and_star() {
        let p2 = Tree::parse("2\n0 1\n").unwrap();
        assert_eq!(p2.edges(), &[(0, 1)]);

        let star = Tree::parse("4\n0 1\n0 2\n0 3\n").unwrap();
        let mut degrees: Vec<_> = (0..4).map(|v| star.degree(v)).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(degrees, vec![3, 1, 1, 1]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            Tree::parse("3\n0 1\n1 x\n").unwrap_err(),
            TreeError::Parse { line: 3, msg: "invalid vertex \"x\"".into() }
        );
        assert!(matches!(Tree::parse("3\n0 1\n1 5\n"), Err(TreeError::Parse { line: 3, .. })));
        assert!(matches!(Tree::parse("two\n"), Err(TreeError::Parse { line: 1, .. })));
        assert!(matches!(Tree::parse("2\n0\n"), Err(TreeError::Parse { line: 2, .. })));
        assert!(matches!(Tree::parse("2\n0 1 2\n"), Err(TreeError::Parse { line: 2, .. })));
        assert!(matches!(Tree::parse(""), Err(TreeError::Parse { line: 1, .. })));
    }

    #[test]
    fn structural_errors() {
        // cycle plus isolated vertex: right edge count, disconnected
        let err = Tree::parse("4\n0 1\n1 2\n2 0\n").unwrap_err();
        assert!(matches!(err, TreeError::Structure(ref m) if m.contains("disconnected")), "{err}");
        let err = Tree::parse("3\n0 1\n").unwrap_err();
        assert!(matches!(err, TreeError::Structure(ref m) if m.contains("expected 2 edges")));
        let err = Tree::parse("3\n0 1\n1 0\n").unwrap_err();
        assert!(matches!(err, TreeError::Structure(ref m) if m.contains("duplicate")));
        let err = Tree::parse("2\n1 1\n").unwrap_err();
        assert!(matches!(err, TreeError::Structure(ref m) if m.contains("self-loop")));
        assert!(matches!(Tree::parse("2\n0 1\n0 1\n"), Err(TreeError::Parse { line: 3, .. })));
    }

    #[test]
    fn edge_list_round_trip() {
        let t = Tree::caterpillar(3, 2);
        assert_eq!(Tree::parse(&t.to_edge_list()).unwrap(), t);
        assert_eq!(Tree::single_vertex().to_edge_list(), "1\n");
    }

    #[test]
    fn root_path_in_middle() {
        let p3 = Tree::path(3);
        let rv = root_at(&p3, 1).unwrap();
        assert_eq!(rv.children(1), &[0, 2]);
        assert_eq!(rv.parent(1), None);
        assert_eq!(rv.parent(0), Some(1));
    }

    #[test]
    fn root_path_at_end() {
        let p3 = Tree::path(3);
        let rv = root_at(&p3, 0).unwrap();
        assert_eq!(rv.children(0), &[1]);
        assert_eq!(rv.children(1), &[2]);
        assert_eq!(rv.preorder(), &[0, 1, 2]);
    }

    #[test]
    fn root_star_at_leaf() {
        let star = Tree::star(4);
        let rv = root_at(&star, 2).unwrap();
        assert_eq!(rv.children(2), &[0]);
        assert_eq!(rv.children(0), &[1, 3]);
        assert!(matches!(root_at(&star, 4), Err(TreeError::VertexOutOfRange { vertex: 4, n: 4 })));
    }

    #[test]
    fn child_subtree_examples() {
        let single = Tree::single_vertex();
        assert!(root_at(&single, 0).unwrap().child_subtrees(0).is_empty());

        let star = Tree::star(4);
        let rv = root_at(&star, 0).unwrap();
        assert_eq!(rv.child_subtrees(0), vec![(1, vec![1]), (2, vec![2]), (3, vec![3])]);

        let p4 = Tree::path(4);
        let rv = root_at(&p4, 0).unwrap();
        let comps = rv.child_subtrees(0);
        assert_eq!(comps.len(), 1);
        let mut set = comps[0].1.clone();
        set.sort_unstable();
        assert_eq!((comps[0].0, set), (1, vec![1, 2, 3]));
    }

    #[test]
    fn component_sizes_of_subsets() {
        let p4 = Tree::path(4);
        let mut all = p4.component_sizes(|_| true);
        all.sort_unstable();
        assert_eq!(all, vec![4]);
        assert_eq!(p4.component_sizes(|_| false), vec![1, 1, 1, 1]);
        let mut mid = p4.component_sizes(|i| i != 1);
        mid.sort_unstable();
        assert_eq!(mid, vec![2, 2]);
    }
}
