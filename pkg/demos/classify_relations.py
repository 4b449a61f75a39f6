"""Classify every operator over the bundled relations and print a small table.

Entries read CONST, LOG or LINEAR; "-" marks an invalid relation and
"n/a" a Boolean-only operator applied to an integer relation.
"""
from onlinepm import OperatorKind, classify
from onlinepm.catalog import NAMED
from onlinepm.relation import RelationError

SHORT = {"CONSTANT": "CONST", "LOGARITHMIC": "LOG", "LINEAR": "LINEAR"}


def cell(matrix, op):
    try:
        report = classify(matrix, op, strict=False)
    except RelationError:
        return "n/a"
    return SHORT[report.space_class.value] if report.space_class else "-"


def main():
    ops = list(OperatorKind)
    print("relation".ljust(20) + "".join(op.value.upper().ljust(8) for op in ops))
    for name, matrix in NAMED.items():
        print(name.ljust(20) + "".join(cell(matrix, op).ljust(8) for op in ops))


if __name__ == "__main__":
    main()
