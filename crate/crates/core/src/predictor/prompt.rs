//! Prompt strings for text-completion step predictors.

use super::PredictorQuery;

/// Tactic history rendered for the `PROOF` field.
pub fn render_history(history: &[String]) -> String {
    history.join(";")
}

/// Line-block prompt. State only:
///
/// ```text
/// --- STATE_BEFORE: {state}
/// --- STEPS_TO_NO_GOALS:
/// ```
///
/// With history, a `--- PROOF: {proof}` line sits between the two.
pub fn render_prompt(query: &PredictorQuery) -> String {
    match &query.history {
        None => format!("--- STATE_BEFORE: {}\n--- STEPS_TO_NO_GOALS:", query.state_fp),
        Some(h) => format!(
            "--- STATE_BEFORE: {}\n--- PROOF: {}\n--- STEPS_TO_NO_GOALS:",
            query.state_fp,
            render_history(h)
        ),
    }
}

/// Single-line bracket variant: `[STATE_BEFORE]{state} [STEPS_TO_NO_GOALS]`.
pub fn render_bracket_prompt(query: &PredictorQuery) -> String {
    format!("[STATE_BEFORE]{} [STEPS_TO_NO_GOALS]", query.state_fp)
}
