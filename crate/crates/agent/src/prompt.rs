//! Priority-ranked prompt elements assembled under a token budget.

use std::fmt;

/// Counts tokens. The default is a byte-length approximation; plug in an
/// exact tokenizer when a model's real vocabulary matters.
pub trait Tokenizer {
    fn count(&self, text: &str) -> usize;
}

/// `⌈utf8_len / 4⌉`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ApproxTokenizer;

impl Tokenizer for ApproxTokenizer {
    fn count(&self, text: &str) -> usize {
        text.len().div_ceil(4)
    }
}

impl<F: Fn(&str) -> usize> Tokenizer for F {
    fn count(&self, text: &str) -> usize {
        self(text)
    }
}

pub fn token_count(text: &str) -> usize {
    ApproxTokenizer.count(text)
}

/// Rendering category; also the order categories appear in the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    SystemInstruction,
    ContextBlock,
    TextElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptElement {
    pub kind: ElementKind,
    pub priority: i64,
    pub body: String,
    /// XML tag wrapping a context block; ignored for other kinds.
    pub tag: Option<String>,
}

impl PromptElement {
    pub fn instruction(priority: i64, body: impl Into<String>) -> Self {
        Self {
            kind: ElementKind::SystemInstruction,
            priority,
            body: body.into(),
            tag: None,
        }
    }

    pub fn block(priority: i64, tag: impl Into<String>, body: impl Into<String>) -> Self {
        Self {
            kind: ElementKind::ContextBlock,
            priority,
            body: body.into(),
            tag: Some(tag.into()),
        }
    }

    pub fn text(priority: i64, body: impl Into<String>) -> Self {
        Self {
            kind: ElementKind::TextElement,
            priority,
            body: body.into(),
            tag: None,
        }
    }

    pub fn render(&self) -> String {
        match (&self.kind, &self.tag) {
            (ElementKind::ContextBlock, Some(tag)) => format!("<{tag}>\n{}\n</{tag}>", self.body),
            _ => self.body.clone(),
        }
    }

    /// Tokens of the rendered element.
    pub fn token_count(&self, tokenizer: &dyn Tokenizer) -> usize {
        tokenizer.count(&self.render())
    }
}

impl fmt::Display for PromptElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

const SEPARATOR: &str = "\n\n";

/// Result of an assembly: the prompt and which elements made it in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assembled {
    pub prompt: String,
    /// Indices into the element list, in selection (priority) order.
    pub included: Vec<usize>,
}

/// Sorts by descending priority (ties keep insertion order) and scans once:
/// an element that does not fit is skipped and the scan continues with
/// smaller ones. Selected elements render by category, then priority.
pub fn assemble(elements: &[PromptElement], budget: usize, tokenizer: &dyn Tokenizer) -> Assembled {
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(elements[i].priority));
    let separator_cost = tokenizer.count(SEPARATOR);
    let mut used = 0usize;
    let mut included = Vec::new();
    for i in order {
        let cost = elements[i].token_count(tokenizer) + if included.is_empty() { 0 } else { separator_cost };
        if used + cost <= budget {
            used += cost;
            included.push(i);
        }
    }
    // A tokenizer that is not subadditive can still overshoot once the
    // pieces are joined; shed the lowest-priority picks until it fits.
    loop {
        let prompt = render(elements, &included);
        if tokenizer.count(&prompt) <= budget || included.is_empty() {
            return Assembled { prompt, included };
        }
        included.pop();
    }
}

fn render(elements: &[PromptElement], included: &[usize]) -> String {
    let mut chosen: Vec<usize> = included.to_vec();
    chosen.sort_by_key(|&i| (elements[i].kind, std::cmp::Reverse(elements[i].priority), i));
    chosen.iter().map(|&i| elements[i].render()).collect::<Vec<_>>().join(SEPARATOR)
}

/// Registry of elements plus a budget.
#[derive(Debug, Clone, Default)]
pub struct PromptManager {
    elements: Vec<PromptElement>,
}

impl PromptManager {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, element: PromptElement) -> &mut Self {
        self.elements.push(element);
        self
    }

    pub fn extend(&mut self, elements: impl IntoIterator<Item = PromptElement>) -> &mut Self {
        self.elements.extend(elements);
        self
    }

    pub fn elements(&self) -> &[PromptElement] {
        &self.elements
    }

    pub fn assemble(&self, budget: usize) -> String {
        assemble(&self.elements, budget, &ApproxTokenizer).prompt
    }

    pub fn assemble_with(&self, budget: usize, tokenizer: &dyn Tokenizer) -> Assembled {
        assemble(&self.elements, budget, tokenizer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approximation() {
        assert_eq!(token_count(""), 0);
        assert_eq!(token_count("abcdefgh"), 2);
        assert_eq!(token_count("abcdefghi"), 3);
        assert_eq!(token_count("é"), 1);
    }

    #[test]
    fn category_order_regardless_of_priority() {
        let els = vec![
            PromptElement::text(2000, "free text"),
            PromptElement::block(500, "rules", "be nice"),
            PromptElement::instruction(100, "you are a director"),
        ];
        let out = assemble(&els, usize::MAX, &ApproxTokenizer);
        assert_eq!(out.prompt, "you are a director\n\n<rules>\nbe nice\n</rules>\n\nfree text");
        assert_eq!(out.included, vec![0, 1, 2]);
    }

    #[test]
    fn skip_and_continue() {
        let els = vec![
            PromptElement::instruction(10, "a".repeat(40)),
            PromptElement::text(9, "b".repeat(400)),
            PromptElement::text(8, "c".repeat(8)),
        ];
        let out = assemble(&els, 13, &ApproxTokenizer);
        assert_eq!(out.included, vec![0, 2]);
        assert!(token_count(&out.prompt) <= 13);
    }

    #[test]
    fn custom_tokenizer_is_used() {
        let words = |s: &str| s.split_whitespace().count();
        let els = vec![PromptElement::text(1, "one two three"), PromptElement::text(0, "four")];
        let out = assemble(&els, 3, &words);
        assert_eq!(out.prompt, "one two three");
    }

    #[test]
    fn empty_budget_gives_empty_prompt() {
        let els = vec![PromptElement::text(1, "x")];
        assert_eq!(assemble(&els, 0, &ApproxTokenizer).prompt, "");
    }
}
