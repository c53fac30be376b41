import pytest

from diagtor.diagrams import SetPartition


def cylinder_diagram(n, left_arcs, right_arcs, through):
    """Pairing from arcs on the unprimed row, arcs on the primed row and strands i -> j'."""
    blocks = [[a, b] for a, b in left_arcs]
    blocks += [[f"{a}'", f"{b}'"] for a, b in right_arcs]
    blocks += [[a, f"{b}'"] for a, b in through]
    return SetPartition.from_blocks(n, blocks)


@pytest.fixture(scope="session")
def j11_example():
    """The worked product in J_11: alpha, beta and the diagram of alpha*beta (one middle loop)."""
    alpha = cylinder_diagram(
        11,
        [(1, 11), (2, 10), (4, 5), (6, 7)],
        [(5, 6), (2, 3), (8, 11), (9, 10)],
        [(3, 7), (8, 1), (9, 4)],
    )
    beta = cylinder_diagram(
        11,
        [(1, 11), (2, 10), (4, 7), (5, 6), (8, 9)],
        [(4, 5), (2, 3), (6, 11), (7, 8), (9, 10)],
        [(3, 1)],
    )
    product = cylinder_diagram(
        11,
        [(1, 11), (2, 10), (4, 5), (6, 7), (3, 9)],
        [(2, 3), (4, 5), (6, 11), (7, 8), (9, 10)],
        [(8, 1)],
    )
    return alpha, beta, product


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
