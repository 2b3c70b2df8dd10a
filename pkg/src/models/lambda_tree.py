import logging
from dataclasses import dataclass, field
from typing import List, Tuple, Union

from src.models.lambda_term import (Abs, Diverges, Found, FreeVar, LambdaTerm, Unknown, Var, find_hnf,
                                    find_whnf, peel, spine)

logger = logging.getLogger(__name__)

Head = Union[int, str]  # de Bruijn index under all enclosing binders, or a free name


@dataclass(frozen=True)
class Bottom:
    def __str__(self):
        return "⊥"


@dataclass(frozen=True)
class Node:
    """λx1…xn. y T1 … Tm; an LT node always has binders == 0."""
    binders: int
    head: Head
    children: Tuple["Tree", ...]
    names: Tuple[str, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class Lam:
    child: "Tree"
    name: str = field(default="x", compare=False)


Tree = Union[Bottom, Node, Lam, Unknown]


def _head_of(body: LambdaTerm) -> Tuple[Head, List[LambdaTerm]]:
    head, args = spine(body)
    if isinstance(head, Var):
        return head.index, args
    if isinstance(head, FreeVar):
        return head.name, args
    raise ValueError(f"no head variable in {head}")


def bohm_tree(t: LambdaTerm, depth: int, budget: int, detect_loops: bool = False) -> Tree:
    """Unfolds head normal forms; ⊥ is only produced by the loop detector."""
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    if depth == 0:
        return Unknown(0)
    result = find_hnf(t, budget, detect_loops)
    if isinstance(result, Diverges):
        return Bottom()
    if isinstance(result, Unknown):
        return result
    names, body = peel(result.term)
    head, args = _head_of(body)
    children = tuple(bohm_tree(a, depth - 1, budget, detect_loops) for a in args)
    return Node(len(names), head, children, tuple(names))


def levy_longo_tree(t: LambdaTerm, depth: int, budget: int, detect_loops: bool = False) -> Tree:
    """Unfolds weak head normal forms; depth counts variable nodes, abstractions are free.

    A run of abstractions shares one budget so an endless stream of λs still ends in Unknown.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    if depth == 0:
        return Unknown(0)
    spent = 0
    binders: List[str] = []
    current = t
    while True:
        result = find_whnf(current, budget - spent, detect_loops)
        if isinstance(result, Diverges):
            tree: Tree = Bottom()
            break
        if isinstance(result, Unknown):
            tree = Unknown(spent + result.steps)
            break
        spent += result.steps
        if isinstance(result.term, Abs):
            binders.append(result.term.name)
            current = result.term.body
            continue
        head, args = _head_of(result.term)
        tree = Node(0, head, tuple(levy_longo_tree(a, depth - 1, budget, detect_loops) for a in args))
        break
    for name in reversed(binders):
        tree = Lam(tree, name)
    return tree


# Comparison

@dataclass(frozen=True)
class TreeEqual:
    def __str__(self):
        return "Equal"


@dataclass(frozen=True)
class TreeDiff:
    path: Tuple[int, ...]

    def __str__(self):
        return f"Diff({format_path(self.path)})"


@dataclass(frozen=True)
class TreeUnknown:
    path: Tuple[int, ...]

    def __str__(self):
        return f"Unknown({format_path(self.path)})"


def format_path(path: Tuple[int, ...]) -> str:
    return ".".join(map(str, path)) if path else "ε"


def tree_equal(a: Tree, b: Tree, depth: int, path: Tuple[int, ...] = ()):
    """First difference or unresolved node in depth-first order, looking `depth` variable levels deep."""
    if depth <= 0:
        return TreeEqual()
    if isinstance(a, Unknown) or isinstance(b, Unknown):
        return TreeUnknown(path)
    if isinstance(a, Bottom) or isinstance(b, Bottom):
        return TreeEqual() if a == b else TreeDiff(path)
    if isinstance(a, Lam) or isinstance(b, Lam):
        if not (isinstance(a, Lam) and isinstance(b, Lam)):
            return TreeDiff(path)
        return tree_equal(a.child, b.child, depth, path + (0,))
    if (a.binders, a.head, len(a.children)) != (b.binders, b.head, len(b.children)):
        return TreeDiff(path)
    for j, (x, y) in enumerate(zip(a.children, b.children)):
        verdict = tree_equal(x, y, depth - 1, path + (j,))
        if not isinstance(verdict, TreeEqual):
            return verdict
    return TreeEqual()


def print_tree(tree: Tree, names: Tuple[str, ...] = ()) -> str:
    if isinstance(tree, (Bottom, Unknown)):
        return str(tree)
    if isinstance(tree, Lam):
        scope = names + (tree.name,)
        return f"λ{tree.name}.{print_tree(tree.child, scope)}"
    scope = names + tree.names
    if isinstance(tree.head, int):
        head = scope[len(scope) - 1 - tree.head] if tree.head < len(scope) else f"#{tree.head}"
    else:
        head = tree.head
    prefix = f"λ{' '.join(tree.names)}." if tree.binders else ""
    if not tree.children:
        return f"{prefix}{head}"
    return f"{prefix}{head} [{', '.join(print_tree(c, scope) for c in tree.children)}]"


def lt_spine_depth(tree: Tree) -> int:
    """Length of the λa.a(…) spine at the root: Lam over a Node applying the bound variable to one child."""
    count = 0
    while isinstance(tree, Lam) and isinstance(tree.child, Node) and tree.child.head == 0 \
            and len(tree.child.children) == 1:
        count += 1
        tree = tree.child.children[0]
    return count
