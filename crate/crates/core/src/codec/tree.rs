use super::{Code, CodeTable, CodecError, Direction, Symbol, TableSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(usize);

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Internal {
        children: [Option<NodeId>; 4],
        /// Leaves of this subtree in L, R, U, D depth-first order.
        leaves: Vec<Symbol>,
        path: Vec<Direction>,
    },
    Leaf {
        symbol: Symbol,
        path: Vec<Direction>,
    },
}

/// Tree view of a [`CodeTable`]; each edge is a direction, each leaf a symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeTree {
    nodes: Vec<Node>,
}

impl CodeTree {
    pub fn from_table(table: &CodeTable) -> CodeTree {
        let mut nodes = vec![Node::Internal {
            children: [None; 4],
            leaves: Vec::new(),
            path: Vec::new(),
        }];
        for (symbol, code) in table.iter() {
            let keys = code.keys();
            let mut at = 0;
            for (depth, &dir) in keys.iter().enumerate() {
                let last = depth + 1 == keys.len();
                let next = match &nodes[at] {
                    Node::Internal { children, .. } => children[dir.index()],
                    Node::Leaf { .. } => unreachable!("table is prefix-free"),
                };
                let next = match next {
                    Some(id) => id.0,
                    None => {
                        let path = keys[..=depth].to_vec();
                        nodes.push(if last {
                            Node::Leaf { symbol, path }
                        } else {
                            Node::Internal {
                                children: [None; 4],
                                leaves: Vec::new(),
                                path,
                            }
                        });
                        let id = nodes.len() - 1;
                        if let Node::Internal { children, .. } = &mut nodes[at] {
                            children[dir.index()] = Some(NodeId(id));
                        }
                        id
                    }
                };
                at = next;
            }
        }
        let mut tree = CodeTree { nodes };
        tree.fill_leaves(NodeId(0));
        tree
    }

    fn fill_leaves(&mut self, id: NodeId) -> Vec<Symbol> {
        let children = match &self.nodes[id.0] {
            Node::Leaf { symbol, .. } => return vec![*symbol],
            Node::Internal { children, .. } => *children,
        };
        let mut all = Vec::new();
        for child in children.into_iter().flatten() {
            all.extend(self.fill_leaves(child));
        }
        if let Node::Internal { leaves, .. } = &mut self.nodes[id.0] {
            *leaves = all.clone();
        }
        all
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn child(&self, id: NodeId, dir: Direction) -> Option<NodeId> {
        match &self.nodes[id.0] {
            Node::Internal { children, .. } => children[dir.index()],
            Node::Leaf { .. } => None,
        }
    }

    pub fn path(&self, id: NodeId) -> &[Direction] {
        match &self.nodes[id.0] {
            Node::Internal { path, .. } | Node::Leaf { path, .. } => path,
        }
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.path(id).len()
    }

    pub fn leaf_symbol(&self, id: NodeId) -> Option<Symbol> {
        match &self.nodes[id.0] {
            Node::Leaf { symbol, .. } => Some(*symbol),
            Node::Internal { .. } => None,
        }
    }

    /// All symbols reachable from `id`.
    pub fn leaves(&self, id: NodeId) -> &[Symbol] {
        match &self.nodes[id.0] {
            Node::Internal { leaves, .. } => leaves,
            Node::Leaf { symbol, .. } => std::slice::from_ref(symbol),
        }
    }

    /// The four candidate boxes at `id`: the leaf set behind each direction.
    pub fn partition(&self, id: NodeId) -> [&[Symbol]; 4] {
        let mut boxes: [&[Symbol]; 4] = [&[]; 4];
        for dir in Direction::ALL {
            if let Some(child) = self.child(id, dir) {
                boxes[dir.index()] = self.leaves(child);
            }
        }
        boxes
    }

    pub fn decode(&self, keys: &[Direction]) -> Result<Vec<Symbol>, CodecError> {
        let mut out = Vec::new();
        let mut at = self.root();
        let mut since_emit = 0;
        for (position, &direction) in keys.iter().enumerate() {
            let next = self
                .child(at, direction)
                .ok_or(CodecError::ExitsTree { direction, position })?;
            since_emit += 1;
            match self.leaf_symbol(next) {
                Some(symbol) => {
                    out.push(symbol);
                    at = self.root();
                    since_emit = 0;
                }
                None => at = next,
            }
        }
        if since_emit > 0 {
            return Err(CodecError::IncompleteCode {
                consumed: keys.len(),
            });
        }
        Ok(out)
    }

    /// Rebuilds the table this tree encodes.
    pub fn to_table(&self) -> CodeTable {
        let entries = self.nodes.iter().filter_map(|n| match n {
            Node::Leaf { symbol, path } => Some((*symbol, Code::new(path.clone()).expect("leaf below root"))),
            Node::Internal { .. } => None,
        });
        CodeTable::from_entries(entries, TableSource::Loaded).expect("tree paths are prefix-free")
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_matches_children() {
        let table = CodeTable::parse("a\tL\nb\tRL\nc\tRR\nd\tU\n").unwrap();
        let tree = table.tree();
        let boxes = tree.partition(tree.root());
        assert_eq!(boxes[0], &[Symbol::Char('a')]);
        assert_eq!(boxes[1], &[Symbol::Char('b'), Symbol::Char('c')]);
        assert_eq!(boxes[2], &[Symbol::Char('d')]);
        assert!(boxes[3].is_empty());
        assert_eq!(tree.leaves(tree.root()).len(), 4);
    }

    #[test]
    fn tree_round_trips_table() {
        let table = CodeTable::parse("a\tL\nb\tRL\nc\tRRD\nd\tU\n").unwrap();
        assert_eq!(table.tree().to_table(), table);
    }
}
