from __future__ import annotations

from bisched.core.errors import ParseError
from bisched.reductions.sat import Formula


def parse_dimacs(text: str) -> Formula:
    """DIMACS CNF: comment lines `c …`, header `p cnf V C`, clauses terminated by 0."""
    variables: int | None = None
    declared = 0
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(("c", "%")):
            continue
        if stripped.startswith("p"):
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"строка {number}", "ожидался заголовок 'p cnf <V> <C>'")
            try:
                variables, declared = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise ParseError(f"строка {number}", "числа в заголовке некорректны") from exc
            continue
        if variables is None:
            raise ParseError(f"строка {number}", "клауза до заголовка 'p cnf'")
        for token in stripped.split():
            try:
                literal = int(token)
            except ValueError as exc:
                raise ParseError(f"строка {number}", f"некорректный литерал '{token}'") from exc
            if literal == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(literal)
    if variables is None:
        raise ParseError("$", "нет заголовка 'p cnf'")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != declared:
        raise ParseError("$", f"заявлено клауз {declared}, прочитано {len(clauses)}")
    return Formula(variables, tuple(clauses))


def write_dimacs(formula: Formula) -> str:
    lines = [f"p cnf {formula.variables} {len(formula.clauses)}"]
    lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in formula.clauses]
    return "\n".join(lines) + "\n"
