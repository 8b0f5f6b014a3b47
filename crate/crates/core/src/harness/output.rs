use std::fmt::Write as _;

use super::{ConvergenceRow, RunOutput, SweepRow};
use crate::remap::StepReport;

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_default()
}

/// Convergence table, one row per mesh.
pub fn errors_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("elements,r_max,steps,l1,order_l1,l2,order_l2,linf,order_linf\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{:.6e},{},{:.6e},{},{:.6e},{},{:.6e},{}",
            r.elements,
            r.r_max,
            r.steps,
            r.l1,
            opt(r.order_l1),
            r.l2,
            opt(r.order_l2),
            r.linf,
            opt(r.order_linf)
        );
    }
    s
}

/// Per-step mass history.
pub fn mass_csv(reports: &[StepReport]) -> String {
    let mut s = String::from("step,t,dt,mass,dmass,theta_min,flagged\n");
    for (n, r) in reports.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{:.17e},{:.17e},{:.17e},{:.6e},{:.17e},{}",
            n + 1,
            r.t + r.dt,
            r.dt,
            r.mass_after,
            r.dmass(),
            r.theta_min,
            r.flagged
        );
    }
    s
}

/// Error-versus-CFL table.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("cfl,steps,l1,l2,linf,max_abs\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:.6e},{:.6e},{:.6e},{:.6e}",
            r.cfl, r.steps, r.l1, r.l2, r.linf, r.max_abs
        );
    }
    s
}

/// Human-readable run summary.
pub fn report_text(out: &RunOutput) -> String {
    let s = &out.spec;
    let mut t = String::new();
    let _ = writeln!(t, "problem     {}", s.problem);
    let _ = writeln!(t, "velocity    {}", s.velocity());
    let _ = writeln!(t, "mesh        {} ({} elements)", s.mesh, out.mesh.len());
    let _ = writeln!(t, "r_max       {:.6e}", out.mesh.r_max());
    let _ = writeln!(t, "degree      {}", s.degree);
    let _ = writeln!(t, "cfl         {}", s.cfl);
    let _ = writeln!(t, "t_final     {}", s.t_final);
    let _ = writeln!(t, "dt          {:.6e}", out.dt);
    let _ = writeln!(t, "steps       {}", out.steps());
    let _ = writeln!(t, "upstream    {:?}{}", s.shape, if s.relaxed { " (relaxed)" } else { "" });
    let _ = writeln!(t, "weno        {}", s.limiters.weno);
    let _ = writeln!(t, "pp          {}", s.limiters.pp);
    let _ = writeln!(t, "mass0       {:.17e}", out.initial.total_mass());
    let _ = writeln!(t, "mass        {:.17e}", out.field.total_mass());
    let _ = writeln!(t, "max_dmass   {:.3e}", out.max_step_mass_change());
    let fallbacks: usize = out.reports.iter().map(|r| r.fallbacks.len()).sum();
    let _ = writeln!(t, "fallbacks   {fallbacks}");
    let wall: f64 = out.reports.iter().map(|r| r.wall_time.as_secs_f64()).sum();
    let _ = writeln!(t, "wall_s      {wall:.3}");
    match &out.errors {
        Some(e) => {
            let _ = writeln!(t, "l1          {:.6e}", e.l1);
            let _ = writeln!(t, "l2          {:.6e}", e.l2);
            let _ = writeln!(t, "linf        {:.6e}", e.linf);
        }
        None => {
            let _ = writeln!(t, "errors      n/a");
        }
    }
    t
}
