"""Regenerate the JSON data files under src/groundwork/catalog/.

Every payload is produced by the library's own constructors and
serializers, so the files stay in sync with the validators that read
them back.  Output is deterministic (sorted keys, two-space indent,
trailing newline).
"""
import json
import pathlib

from groundwork.catalog import module_to_payload, ring_to_payload
from groundwork.fincat import (FinCategory, poset_category,
                               terminal_category, walking_arrow)
from groundwork.modres import ring_f2x, ring_zmod, zmod_module
from groundwork.presheaf import presheaf_to_json_obj, representable
from groundwork.site import (discrete_space, pseudo_circle,
                             pseudo_sphere_6, space_from_minimal_opens,
                             space_to_json)

OUT = pathlib.Path(__file__).resolve().parent.parent \
    / "src" / "groundwork" / "catalog"


def category_payload(C: FinCategory):
    return {
        "objects": list(C.objects),
        "arrows": [{"id": f, "dom": C.dom[f], "cod": C.cod[f]}
                   for f in C.arrows],
        "compose": [[g, f, h]
                    for (g, f), h in sorted(C.compose_table.items())],
        "identities": {o: C.identity[o] for o in C.objects},
    }


def space_payload(X):
    return json.loads(space_to_json(X))


def square_poset():
    leq = {("0", "0"), ("x", "x"), ("y", "y"), ("1", "1"), ("0", "x"),
           ("0", "y"), ("0", "1"), ("x", "1"), ("y", "1")}
    return poset_category(("0", "x", "y", "1"),
                          lambda a, b: (a, b) in leq)


def span():
    return poset_category(
        ("l", "c", "r"),
        lambda x, y: x == y or (x == "c" and y in ("l", "r")))


def cospan():
    return poset_category(
        ("l", "c", "r"),
        lambda x, y: x == y or (y == "c" and x in ("l", "r")))


def interval_3():
    return space_from_minimal_opens(
        ("a", "b", "c"), {"a": {"a"}, "b": {"b"}, "c": {"a", "b", "c"}})


ENTRIES = [
    ("walking-arrow", "category",
     "free-standing arrow 0 -> 1",
     lambda: category_payload(walking_arrow())),
    ("terminal", "category",
     "one object, one identity arrow",
     lambda: category_payload(terminal_category())),
    ("square-poset", "category",
     "poset 0 < x, y < 1 viewed as a category",
     lambda: category_payload(square_poset())),
    ("span", "category",
     "poset with c below l and r (two arrows out of the middle)",
     lambda: category_payload(span())),
    ("cospan", "category",
     "poset with l and r below c (two arrows into the middle); with "
     "sigma = {l<=c} the right Ore square condition fails",
     lambda: category_payload(cospan())),
    ("pseudo-circle", "space",
     "4-point model of the circle: two closed points each below two "
     "open points",
     lambda: space_payload(pseudo_circle())),
    ("pseudo-sphere-6", "space",
     "6-point model of the 2-sphere (non-Hausdorff suspension of the "
     "pseudo-circle)",
     lambda: space_payload(pseudo_sphere_6())),
    ("interval-3", "space",
     "3-point contractible space: one generic point over two closed "
     "points",
     lambda: space_payload(interval_3())),
    ("discrete-2", "space",
     "two-point discrete space",
     lambda: space_payload(discrete_space(("p", "q")))),
    ("Z2", "ring", "the field Z/2",
     lambda: ring_to_payload(ring_zmod(2))),
    ("Z4", "ring", "Z/4, the smallest non-semisimple Z/n",
     lambda: ring_to_payload(ring_zmod(4))),
    ("Z6", "ring", "Z/6 = Z/2 x Z/3, semisimple but not a field",
     lambda: ring_to_payload(ring_zmod(6))),
    ("F2x", "ring", "F2[x]/(x^2), local with nilpotents",
     lambda: ring_to_payload(ring_f2x())),
    ("Z2-over-Z4", "module",
     "Z/2 as a Z/4-module via reduction",
     lambda: module_to_payload(zmod_module(ring_zmod(4), 2), "Z4")),
    ("yoneda-presheaf", "presheaf",
     "the representable presheaf at object 1 of the walking arrow",
     lambda: presheaf_to_json_obj(representable(walking_arrow(), "1"),
                                  over_name="walking-arrow")),
    ("square-presheaf", "presheaf",
     "the representable presheaf at the top object of the square poset",
     lambda: presheaf_to_json_obj(representable(square_poset(), "1"),
                                  over_name="square-poset")),
    ("square-site", "site",
     "square poset with {x<=1, y<=1} covering the top object",
     lambda: {"over": "square-poset",
              "covers": {"1": [["x<=1", "y<=1"]]}}),
    ("constant-Z3-pseudo-circle", "sheaf",
     "constant sheaf Z/3 on the pseudo-circle",
     lambda: {"space": "pseudo-circle", "construction": "constant",
              "factors": [3]}),
    ("skyscraper-Z4-pseudo-circle", "sheaf",
     "skyscraper Z/4 at the closed point a of the pseudo-circle",
     lambda: {"space": "pseudo-circle", "construction": "skyscraper",
              "point": "a", "factors": [4]}),
    ("sigma-walking-arrow", "sigma",
     "the non-identity arrow of the walking arrow",
     lambda: {"over": "walking-arrow", "arrows": ["a"]}),
    ("sigma-square-poset", "sigma",
     "one lower edge of the square poset",
     lambda: {"over": "square-poset", "arrows": ["0<=x"]}),
]


def main():
    OUT.mkdir(exist_ok=True)
    for name, kind, note, make in ENTRIES:
        data = {"name": name, "kind": kind, "note": note,
                "payload": make()}
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
        (OUT / (name + ".json")).write_text(text)
        print("wrote", name)


if __name__ == "__main__":
    main()
