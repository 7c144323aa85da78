"""Smoke test for the compiled extension; run after `pip install -e crates/python`."""

import json
import math

import circumdiv as cd


def main():
    square = cd.PointSet([[0, 0], [1, 0], [0, 1], [1, 1]], labels=["a", "b", "c", "d"])
    r, center = cd.circumradius(square, cd.Kernel.ball(2))
    assert math.isclose(r, math.sqrt(0.5), abs_tol=1e-12), r
    assert all(math.isclose(c, 0.5, abs_tol=1e-12) for c in center)

    assert cd.circumradius(square, cd.Kernel.unit_cube(2))[0] == 1.0
    assert cd.circumradius(square, cd.Kernel.simplex_neg(2))[0] == 2.0
    hp = cd.Kernel.hpolytope([[1, 0], [0, 1], [-1, -1]], [0, 0, 1])
    assert math.isclose(cd.circumradius(square, hp)[0], 2.0, abs_tol=1e-9)

    k = cd.Kernel.from_json(json.dumps({"type": "simplex_pos", "dim": 2}))
    assert k.kind == "simplex_pos" and k.dim == 2
    assert json.loads(k.to_json()) == {"type": "simplex_pos", "dim": 2}

    table = cd.kernel_diversity(square, cd.Kernel.ball(2))
    report = table.check_axioms()
    assert report["is_diversity"], report

    core = cd.ball_core_set(square, 1.0)
    assert len(core["indices"]) == 2

    bad = cd.Diversity.from_profile(["a", "b", "c", "d"], [0, 1, 1, 2])
    crit = cd.symmetric_embeddable(bad)
    assert not crit["embeddable"] and crit["witness"]["k"] == 4
    assert not cd.negative_type_check(bad)["is_negative_type"]

    count = cd.Diversity.from_profile(["a", "b", "c"], [0, 1, 2])
    emb = cd.symmetric_embed(count)
    assert set(emb["assignment"]) == {"a", "b", "c"}

    decision = cd.ball_embed_decide(table, 2)
    assert decision["embeddable"] and decision["reason"]["kind"] == "Ok"

    back = cd.Diversity.from_json(table.to_json())
    assert back.values() == table.values()

    try:
        cd.Kernel.hpolytope([[1, 0]], [1])
    except ValueError as e:
        assert "invalid_kernel" in str(e) or "kernel" in str(e).lower()
    else:
        raise AssertionError("unbounded polytope accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
