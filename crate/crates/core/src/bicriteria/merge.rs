use crate::error::{Error, Result};
use crate::model::{Instance, TaskId};

/// Small sequential tasks stacked one after another on a single processor.
#[derive(Clone, Debug, PartialEq)]
pub struct MergedStack {
    /// Execution order, decreasing weight.
    pub members: Vec<TaskId>,
    pub duration: f64,
    pub weight: f64,
}

/// Stacks tasks with `p(1) <= t_j / 2` into windows of length `t_j`.
///
/// Tasks are taken by decreasing weight (ties: smaller id) and put first-fit
/// into the earliest stack that still has room. Room is measured on the
/// window itself: a member fits when its completion, accumulated from
/// `t_j`, does not pass `2·t_j`, so a stack placed at its batch start always
/// ends inside the batch.
///
/// Returns the stacks and the tasks that fit nowhere (always empty for
/// eligible input).
pub fn merge_small_tasks(
    instance: &Instance,
    eligible: &[TaskId],
    t_j: f64,
) -> Result<(Vec<MergedStack>, Vec<TaskId>)> {
    if let Some(&bad) = eligible
        .iter()
        .find(|&&id| instance.task(id).time(1) > t_j / 2.0)
    {
        return Err(Error::InvalidArgument(format!(
            "task {bad} is not mergeable at batch length {t_j}"
        )));
    }
    let mut order = eligible.to_vec();
    order.sort_by(|&a, &b| {
        instance
            .task(b)
            .weight
            .total_cmp(&instance.task(a).weight)
            .then(a.cmp(&b))
    });

    let window_end = 2.0 * t_j;
    // (stack, completion accumulated from t_j)
    let mut stacks: Vec<(MergedStack, f64)> = Vec::new();
    let mut leftovers = Vec::new();
    for id in order {
        let task = instance.task(id);
        let p = task.time(1);
        match stacks.iter_mut().find(|(_, end)| *end + p <= window_end) {
            Some((stack, end)) => {
                stack.members.push(id);
                stack.duration += p;
                stack.weight += task.weight;
                *end += p;
            }
            None if t_j + p <= window_end => stacks.push((
                MergedStack {
                    members: vec![id],
                    duration: p,
                    weight: task.weight,
                },
                t_j + p,
            )),
            None => leftovers.push(id),
        }
    }
    Ok((stacks.into_iter().map(|s| s.0).collect(), leftovers))
}
