/// A rooted, order-free tree whose leaves name graph vertices.
///
/// Used both for per-level constraint trees and for cluster hierarchies.
/// Child order carries no meaning; only the leaf set below each internal
/// node does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNode {
    Leaf(String),
    Node { id: String, children: Vec<TreeNode> },
}

impl TreeNode {
    pub fn leaf(id: impl Into<String>) -> Self {
        TreeNode::Leaf(id.into())
    }

    pub fn node(id: impl Into<String>, children: Vec<TreeNode>) -> Self {
        TreeNode::Node {
            id: id.into(),
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf(_))
    }

    /// Vertex id for leaves, node id for internal nodes.
    pub fn label(&self) -> &str {
        match self {
            TreeNode::Leaf(id) | TreeNode::Node { id, .. } => id,
        }
    }

    pub fn children(&self) -> &[TreeNode] {
        match self {
            TreeNode::Leaf(_) => &[],
            TreeNode::Node { children, .. } => children,
        }
    }

    /// Leaves in depth-first order.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            TreeNode::Leaf(id) => out.push(id),
            TreeNode::Node { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    /// Total number of nodes (leaves and internal).
    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(TreeNode::node_count).sum::<usize>()
    }

    /// Internal node ids in pre-order.
    pub fn internal_ids(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |n, _| {
            if let TreeNode::Node { id, .. } = n {
                out.push(id.as_str());
            }
        });
        out
    }

    /// `(internal id, leaf set)` for every internal node, pre-order.
    pub fn internal_leaf_sets(&self) -> Vec<(&str, Vec<&str>)> {
        let mut out = Vec::new();
        self.walk(&mut |n, _| {
            if let TreeNode::Node { id, .. } = n {
                out.push((id.as_str(), n.leaves()));
            }
        });
        out
    }

    /// Pre-order visit with depth.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a TreeNode, usize)) {
        self.walk_at(0, f);
    }

    fn walk_at<'a>(&'a self, depth: usize, f: &mut dyn FnMut(&'a TreeNode, usize)) {
        f(self, depth);
        for c in self.children() {
            c.walk_at(depth + 1, f);
        }
    }

    /// Contracts internal nodes with a single child and drops internal
    /// nodes without leaves. `None` when no leaf remains.
    pub fn normalized(&self) -> Option<TreeNode> {
        match self {
            TreeNode::Leaf(_) => Some(self.clone()),
            TreeNode::Node { id, children } => {
                let mut kept: Vec<TreeNode> =
                    children.iter().filter_map(TreeNode::normalized).collect();
                match kept.len() {
                    0 => None,
                    1 => kept.pop(),
                    _ => Some(TreeNode::node(id.clone(), kept)),
                }
            }
        }
    }

    /// Keeps only leaves accepted by `keep`; internal nodes left without
    /// leaves are dropped. The result is not normalized.
    pub fn restricted(&self, keep: &dyn Fn(&str) -> bool) -> Option<TreeNode> {
        match self {
            TreeNode::Leaf(id) => keep(id).then(|| self.clone()),
            TreeNode::Node { id, children } => {
                let kept: Vec<TreeNode> =
                    children.iter().filter_map(|c| c.restricted(keep)).collect();
                (!kept.is_empty()).then(|| TreeNode::node(id.clone(), kept))
            }
        }
    }

    /// Leaf depth maximum (a lone leaf has height 0).
    pub fn height(&self) -> usize {
        self.children()
            .iter()
            .map(|c| 1 + c.height())
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unary_chain_collapses_to_leaf() {
        let t = TreeNode::node("root", vec![TreeNode::node("x", vec![TreeNode::leaf("a")])]);
        assert_eq!(t.normalized(), Some(TreeNode::leaf("a")));
    }

    #[test]
    fn normalized_binary_tree_is_unchanged() {
        let t = TreeNode::node(
            "r",
            vec![
                TreeNode::node("x", vec![TreeNode::leaf("a"), TreeNode::leaf("b")]),
                TreeNode::leaf("c"),
            ],
        );
        assert_eq!(t.normalized().as_ref(), Some(&t));
    }

    #[test]
    fn restriction_drops_empty_subtrees() {
        let t = TreeNode::node(
            "r",
            vec![
                TreeNode::node("x", vec![TreeNode::leaf("a"), TreeNode::leaf("b")]),
                TreeNode::node("y", vec![TreeNode::leaf("c")]),
            ],
        );
        let r = t.restricted(&|id| id != "c").unwrap();
        assert_eq!(r.internal_ids(), vec!["r", "x"]);
        assert_eq!(r.normalized().unwrap().internal_ids(), vec!["x"]);
    }
}
