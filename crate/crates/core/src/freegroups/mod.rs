//! Words in free groups and folded subgroup graphs.

mod graph;
mod word;

pub use graph::{stallings_graph, GraphError, SubgroupGraph, SubgroupIndex};
pub use word::{free_reduce, parse_word_list, Letter, Word, WordError, MAX_RANK};
