use std::io::{self, Write};

use super::tree::{GameTree, NodeKind};

/// Writes one line per history:
/// `history_id,parent_id,actor,infostate_key,action_label,terminal_utility`.
/// The root has an empty parent; non-terminals have an empty utility.
pub fn write_tree<W: Write>(tree: &GameTree, mut out: W) -> io::Result<()> {
    writeln!(out, "history_id,parent_id,actor,infostate_key,action_label,terminal_utility")?;
    for (h, node) in tree.nodes().iter().enumerate() {
        let parent = node.parent.map(|p| p.to_string()).unwrap_or_default();
        let (actor, key, utility) = match &node.kind {
            NodeKind::Terminal { utility } => ("terminal".to_string(), "", utility.to_string()),
            NodeKind::Chance { .. } => ("chance".to_string(), "", String::new()),
            NodeKind::Decision {
                player, infoset, ..
            } => (player.to_string(), tree.infoset(*infoset).key.as_str(), String::new()),
        };
        writeln!(out, "{h},{parent},{actor},{key},{},{utility}", node.label)?;
    }
    Ok(())
}
