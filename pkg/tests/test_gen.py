import pytest

from lambdabox import parse, show
from lambdabox.cbv import is_restricted
from lambdabox.gen import ATOMS, GenConfig, GenerationStuck, corpus, gen_terms
from lambdabox.syntax import BoxIn, Calculus, children, size
from lambdabox.typecheck import infer


def test_smallest_inhabitant():
    ((ctx, t),) = gen_terms(GenConfig(seed=1, max_size=1), 1, ATOMS[0])
    assert ctx == () and t == parse("c:p")


def test_zero_size_is_stuck():
    with pytest.raises(GenerationStuck):
        gen_terms(GenConfig(max_size=0), 1)


@pytest.mark.parametrize("calc", list(Calculus))
@pytest.mark.parametrize("restricted", [True, False])
def test_typable_and_bounded(calc, restricted):
    cfg = GenConfig(seed=17, max_size=25, calculus=calc, restricted=restricted)
    for ctx, t in gen_terms(cfg, 100):
        infer(ctx, t)
        assert size(t) <= 25
        if restricted:
            assert is_restricted(t)


def test_deterministic():
    cfg = GenConfig(seed=99, max_size=20)
    assert [show(t) for _, t in gen_terms(cfg, 30)] == [show(t) for _, t in gen_terms(cfg, 30)]


def test_box_binder_counts():
    seen = set()

    def walk(t):
        if isinstance(t, BoxIn):
            seen.add(len(t.binders))
        for c in children(t):
            walk(c)

    for _, t in corpus(Calculus.CBN, 200, 25, False):
        walk(t)
    assert seen == {0, 1, 2, 3}


def test_corpus_has_interesting_sizes():
    sizes = [size(t) for _, t in corpus(Calculus.CBV, 200)]
    assert max(sizes) >= 20 and sum(sizes) / len(sizes) > 6
