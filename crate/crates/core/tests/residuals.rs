//! Every closed-form solution satisfies its discretised equation with a
//! second-order residual.

use qgauge::closed_form::{ClosedForm, SolutionId, SolutionKind};
use qgauge::model::{FrameTrajectory, GaugeSpec, PhysicalParams, SpatialGrid};
use qgauge::pde::{residual, residual_of, DEFAULT_DT_FD};
use qgauge::transforms::{EgtForward, FreeFrameView};

fn params() -> PhysicalParams {
    PhysicalParams::new(1.2, 0.9, 0.7, 1.1).unwrap()
}

#[test]
fn all_pairings_converge_at_second_order() {
    let p = params();
    let grid = SpatialGrid::new(-10.0, 5.0, 600).unwrap();
    for kind in SolutionKind::ALL {
        let sol = SolutionId::new(kind).with_epsilon(0.3).with_momentum(0.8);
        for t in [0.0, 0.9] {
            let r = residual(&sol, &kind.gauge(), &grid, t, &p, DEFAULT_DT_FD).unwrap();
            let order = r.convergence_order.unwrap();
            assert!((order - 2.0).abs() < 0.2, "{}: order {order}", kind.name());
            assert!(r.linf_residual < 1e-2, "{}: {}", kind.name(), r.linf_residual);
        }
    }
}

#[test]
fn free_frame_view_of_static_psi1_is_free() {
    let p = params();
    let grid = SpatialGrid::new(-10.0, 5.0, 600).unwrap();
    let traj = FrameTrajectory::canonical(&p);
    let src = ClosedForm::new(SolutionId::new(SolutionKind::Psi1Static).with_epsilon(-0.2), p);
    let free = FreeFrameView::new(EgtForward::new(src, traj, p).unwrap(), p).unwrap();
    let r = residual_of(&free, &GaugeSpec::FreeFrame, &grid, 0.8, &p, DEFAULT_DT_FD).unwrap();
    assert!((r.convergence_order.unwrap() - 2.0).abs() < 0.2);
    // without the τ³ phase the same field does not solve the free equation
    let wrong = EgtForward::new(src, traj, p).unwrap();
    struct AsFree<F>(F);
    impl<F: qgauge::closed_form::AnalyticField> qgauge::closed_form::AnalyticField for AsFree<F> {
        fn gauge(&self) -> GaugeSpec {
            GaugeSpec::FreeFrame
        }
        fn frame(&self) -> qgauge::model::FrameLabel {
            self.0.frame()
        }
        fn value(&self, x: f64, t: f64) -> qgauge::error::Result<num_complex::Complex64> {
            self.0.value(x, t)
        }
    }
    let bad = residual_of(&AsFree(wrong), &GaugeSpec::FreeFrame, &grid, 0.8, &p, DEFAULT_DT_FD).unwrap();
    assert!(bad.linf_residual > 100.0 * r.linf_residual);
}

#[test]
fn accelerated_frame_residual_needs_matching_trajectory() {
    let p = params();
    let grid = SpatialGrid::new(-10.0, 5.0, 300).unwrap();
    let traj = FrameTrajectory::canonical(&p);
    let src = ClosedForm::new(SolutionId::new(SolutionKind::Psi1Static), p);
    let field = EgtForward::new(src, traj, p).unwrap();
    let other = GaugeSpec::Accelerated(FrameTrajectory::new(0.1, 0.0, 0.0).unwrap());
    assert!(residual_of(&field, &other, &grid, 0.5, &p, DEFAULT_DT_FD).is_err());
}
