"""Check the ballean axioms of a space's oracles on a window."""
from __future__ import annotations

from typing import Any, Sequence

from .space import Ballean, NoScale, Window
from .verdict import Answer, Certificate, Verdict


def check_ballean_axioms(space: Ballean, W: Window, scales: Sequence[Any]) -> Verdict:
    """Reflexivity, ball/star duality, composition ``B(B(x, a), b) ⊆ B(x, γ)``
    with ``γ = compose(a, b)``, and connectivity from the center.

    Every carrier point is checked; failures name the axiom and the point.
    """
    sp = space
    alphas = [sp.scale(a) for a in scales]
    carrier = W.carrier

    def fail(axiom: str, point: Any, **extra: Any) -> Verdict:
        cert = Certificate("WitnessPoint", {"axiom": axiom, "point": point, **extra})
        return Verdict(Answer.NO, "axioms", {"scales": alphas}, W, cert, f"axiom {axiom} fails at {point}")

    for x in carrier:
        for a in alphas:
            if x not in sp.ball(x, a):
                return fail("x∈B(x,α)", x, scale=a)
    for x in carrier:
        for a in alphas:
            d = sp.dual(a)
            ball = sp.ball(x, a)
            star = sp.star(x, a)
            if not set(star) <= set(sp.ball(x, d)):
                return fail("B*(x,α)⊆B(x,α')", x, scale=a)
            if not set(ball) <= set(sp.star(x, d)):
                return fail("B(x,α)⊆B*(x,β')", x, scale=a)
            # star is the dual ball: y in B*(x, α) iff x in B(y, α)
            for y in star:
                if x not in sp.ball(y, a):
                    return fail("B*(x,α)={y: x∈B(y,α)}", x, scale=a, other=y)
    gammas = []
    for a in alphas:
        for b in alphas:
            g = sp.compose(a, b)
            gammas.append((a, b, g))
            for x in carrier:
                for y in sp.ball(x, a):
                    for z in sp.ball(y, b):
                        if not sp.within(x, z, g):
                            return fail("B(B(x,α),β)⊆B(x,γ)", x, scale=a, beta=b, other=z)
    for x in carrier:
        try:
            sp.min_scale(W.center, x)
        except NoScale:
            return fail("connected", x)
    cert = Certificate("Cover", {"gamma": gammas, "points": len(carrier)})
    return Verdict(Answer.YES, "axioms", {"scales": alphas}, W, cert, "reflexive, dual, composable and connected on the window")
