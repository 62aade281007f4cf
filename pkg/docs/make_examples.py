"""Regenerate docs/examples/*.json from the sample constructions."""
import json
from fractions import Fraction
from pathlib import Path

from su21.hermitian import horospherical_lift, infinity_lift
from su21.isometry import loxodromic_lift, standard_parabolic
from su21.numberfield import field_to_json
from su21.samples import (
    gaussian_field,
    messy_conjugation,
    picard_generators,
    remark_pair,
    sqrt2_pair,
    sqrt15_example,
)
from su21.serialize import encode

OUT = Path(__file__).parent / "examples"


def field(K):
    d = field_to_json(K)
    d.pop("conjugation_image")
    return d


def write(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def main():
    K = gaussian_field()
    i = K.gen
    write("classify_vertical.json", {"field": field(K), "matrix": encode(standard_parabolic(it=i, eitheta=K.one, field=K))})
    write("classify_loxodromic_float.json", {"mode": "float", "matrix": encode(loxodromic_lift(2 + 1j))})
    for d in (1, 3):
        g = picard_generators(d)
        write(f"group_picard_d{d}.json", {"field": field(g[0].field), "generators": encode(g)})
    G, gens, _ = messy_conjugation()
    write("group_messy.json", {"field": field(G), "generators": encode(gens)})
    write("group_remark.json", {"field": field(K), "generators": encode(remark_pair())})

    def pt(z, t):
        return horospherical_lift(z, Fraction(t), field=K)

    tets = [
        [infinity_lift(K), pt(K.zero, 0), pt(K.one, 1), pt(1 + 2 * i, Fraction(1, 2))],
        [pt(i, 0), pt(K.one, 3), pt(-1 + i, -1), pt(2 - i, Fraction(2, 3))],
    ]
    write("tetrahedra_gaussian.json", {"field": field(K), "tetrahedra": encode(tets)})
    write(
        "tetrahedra_float.json",
        {"mode": "float", "tetrahedra": [[[[complex(x).real, complex(x).imag] for x in v.entries] for v in t] for t in tets]},
    )
    from su21.tetrahedron import IdealTetrahedron, invariants

    inv = invariants(IdealTetrahedron(tuple(tets[1])))
    write(
        "reconstruct_gaussian.json",
        {"field": field(K), "vertices": encode(tets[1][:3]), "invariant": encode(list(inv.as_tuple()))},
    )

    E, H, gamma, roots = sqrt2_pair()
    write("pair_sqrt2.json", {"field": field(E), "form": encode(H)})
    H_bad = type(H).diag([-E.one, roots[2], 3 - roots[2]])
    write("pair_sqrt2_mixed.json", {"field": field(E), "form": encode(H_bad)})
    r = roots[-1]
    R = type(H).diag([r, -E.one, r])
    write(
        "dichotomy_sqrt2.json",
        {
            "field": field(E),
            "form": encode(H),
            "generators": encode([gamma, R]),
            "E": encode([E.gen]),
            "F": encode([roots[2]]),
            "sqrt_generators": [[-1, encode(roots[-1])], [2, encode(roots[2])]],
        },
    )
    from su21.numberfield import multiquadratic_field

    E15, r15 = multiquadratic_field([-1, 15])
    write("pair_sqrt15.json", {"field": field(E15), "form": encode(type(H).diag([-r15[15], E15.one]))})
    K8, H8, g, named = sqrt15_example()
    common = {
        "field": field(K8),
        "form": encode(H8),
        "E": encode([named["i"], named["sqrt15"]]),
        "F": encode([named["sqrt15"]]),
        "sqrt_generators": [[-1, encode(named["i"])], [15, encode(named["sqrt15"])]],
    }
    write("dichotomy_sqrt15_g.json", {**common, "generators": encode([g])})
    write("dichotomy_sqrt15_g2.json", {**common, "generators": encode([g @ g])})


if __name__ == "__main__":
    main()
