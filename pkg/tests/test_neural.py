import math

import pytest
import torch

from oracles import uniform_legal_nll
from jsgen.grammar import default_grammar_text
from jsgen.neural import (CheckpointError, ModelConfig, Seq2Tree, TrainConfig, TrainingDiverged,
                          action_distribution, beam_decode, collate, greedy_decode, load_checkpoint,
                          make_instances, mean_nll, save_checkpoint, score_actions, step_log_probs, train)
from jsgen.prep.corpus import Example, preprocess
from jsgen.prep.vocab import VocabularyMismatch, build_vocab
from jsgen.transit import ApplyConstr, GenSubtoken

EXAMPLES = [
    Example("展示图片链接", "{picUrl;}"),
    Example("展示店铺标志，兜底显示'暂无'", "{shopLogo || '暂无';}"),
    Example("如果直播则展示直播时间，否则展示标题", "{isLive ? liveTime : title;}"),
    Example("展示价格保留2位小数", "{price.toFixed(2);}"),
]


@pytest.fixture(scope="module")
def corpus():
    return [preprocess(e)[0] for e in EXAMPLES]


def _model(corpus, g, hidden=16, embed=8, dtype="float64", seed=0):
    torch.manual_seed(seed)
    vocab = build_vocab(corpus, g)
    return Seq2Tree(ModelConfig(hidden, embed, True, dtype), vocab, g)


@pytest.fixture(scope="module")
def trained(corpus, g):
    model = _model(corpus, g, hidden=32, embed=16)
    inst = make_instances(corpus, model.vocab, g, model.fields)
    train(model, inst, [], TrainConfig(batch_size=4, epochs=400, lr=1e-2, target_loss=0.02))
    return model


def test_encoder_shapes_and_empty_input(corpus, g):
    model = _model(corpus, g)
    enc = model.encode(torch.tensor([[3]]), torch.tensor([1]))
    assert enc.states.shape == (1, 1, 2 * 16)
    with pytest.raises(ValueError):
        make_instances([Example("", "{a;}")], model.vocab, g, model.fields)


@pytest.mark.parametrize("prefix_len", range(0, 12))
def test_distributions_are_normalized(corpus, g, prefix_len):
    model = _model(corpus, g)
    from jsgen.neural import example_actions

    actions = example_actions(corpus[1], g)
    dist = action_distribution(model, corpus[1].tokens, actions[:prefix_len])
    assert abs(sum(dist.values()) - 1.0) < 1e-9
    assert str(actions[prefix_len]) in dist


def test_singleton_mask_gets_all_mass(corpus, g):
    model = _model(corpus, g)
    inst = make_instances(corpus[:1], model.vocab, g, model.fields)
    batch = collate(inst)
    enc = model.encode(batch["token_ids"], batch["lengths"])
    step = model.decode_step(model.initial_step(enc), model.prev_action_embedding(batch["prev_kind"][:, 0],
                             batch["prev_id"][:, 0]), batch["field_id"][:, 0], enc.states.new_zeros(1, 16), enc)
    only = torch.zeros(1, len(model.vocab.productions), dtype=torch.bool)
    only[0, 5] = True
    with torch.no_grad():
        log_prod, *_ = model.log_distributions(step, enc, only, torch.tensor([-1]), batch["copy_ok"][:, 0],
                                               torch.tensor([False]))
    assert math.exp(float(log_prod[0, 5])) == pytest.approx(1.0, abs=1e-12)


def test_copy_supplies_oov_tokens(corpus, g):
    model = _model(corpus, g)
    tokens = ["展", "示", "trainHead"]
    assert "trainHead" not in model.vocab
    prefix = [ApplyConstr(g.constructor("BlockStatement")), ApplyConstr(g.constructor("ExpressionStatement")),
              ApplyConstr(g.constructor("Identifier"))]
    with_copy = action_distribution(model, tokens, prefix)["GenSubtoken[trainHead]"]
    with torch.no_grad():
        model.gate.weight.zero_()
        model.gate.bias.copy_(torch.tensor([0.0, -1e4, 0.0]))
    gen_only = action_distribution(model, tokens, prefix).get("GenSubtoken[trainHead]", 0.0)
    assert with_copy > 0.05 and gen_only < 1e-12


def test_initial_loss_near_uniform_baseline(corpus, g):
    model = _model(corpus, g, hidden=64, embed=32, dtype="float32")
    nll = mean_nll(model, make_instances(corpus, model.vocab, g, model.fields))
    base = uniform_legal_nll(corpus, model.vocab, g)
    assert abs(nll - base) <= 0.2 * base


def test_sequence_score_is_sum_of_steps(trained, corpus):
    for ex in corpus:
        cands = beam_decode(trained, ex.tokens, width=5)
        assert cands
        scores = [c.score for c in cands]
        assert scores == sorted(scores, reverse=True)
        for c in cands:
            assert abs(sum(score_actions(trained, ex.tokens, list(c.actions))) - c.score) < 1e-9


def test_width_one_is_greedy(trained, corpus):
    for ex in corpus + [Example("展示标题", "{title;}")]:
        greedy = greedy_decode(trained, ex.tokens)
        beam = beam_decode(trained, ex.tokens, width=1)
        assert [c.actions for c in beam] == ([greedy.actions] if greedy else [])


def test_trained_model_reproduces_training_set(trained, corpus):
    for ex in corpus:
        assert beam_decode(trained, ex.tokens)[0].code == ex.code


def test_memorize_one_example(corpus, g):
    model = _model(corpus[:1], g, hidden=32, embed=16, dtype="float32")
    inst = make_instances(corpus[:1], model.vocab, g, model.fields)
    curve = train(model, inst, [], TrainConfig(batch_size=1, epochs=300, lr=1e-2, target_loss=0.005))
    assert mean_nll(model, inst) < 0.01 and len(curve) < 300


def test_training_is_deterministic(corpus, g):
    runs = []
    for _ in range(2):
        model = _model(corpus, g, dtype="float32")
        inst = make_instances(corpus, model.vocab, g, model.fields)
        curve = train(model, inst[:3], inst[3:], TrainConfig(batch_size=2, epochs=4, lr=1e-2, seed=7))
        runs.append((curve, [c.code for c in beam_decode(model, corpus[0].tokens)]))
    assert runs[0] == runs[1]


def test_non_finite_loss_aborts(corpus, g):
    model = _model(corpus, g, dtype="float32")
    with torch.no_grad():
        model.att_W.weight.fill_(float("nan"))
    inst = make_instances(corpus, model.vocab, g, model.fields)
    with pytest.raises(TrainingDiverged):
        train(model, inst, [], TrainConfig(epochs=1))


def test_checkpoint_round_trip_is_exact(trained, corpus, g, tmp_path):
    path = tmp_path / "m.pt"
    save_checkpoint(path, trained, default_grammar_text(), {"note": "x"})
    loaded, extra = load_checkpoint(path, default_grammar_text())
    assert extra == {"note": "x"} and loaded.vocab == trained.vocab
    batch = collate(make_instances(corpus, trained.vocab, g, trained.fields))
    with torch.no_grad():
        assert torch.equal(step_log_probs(trained, batch), step_log_probs(loaded, batch))
    assert beam_decode(loaded, corpus[2].tokens) == beam_decode(trained, corpus[2].tokens)


def test_checkpoint_errors(trained, tmp_path):
    path = tmp_path / "m.pt"
    save_checkpoint(path, trained, default_grammar_text())
    with pytest.raises(VocabularyMismatch):
        load_checkpoint(path, default_grammar_text().replace("BreakStatement", "StopStatement"))
    (tmp_path / "junk.pt").write_bytes(b"not a checkpoint")
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path / "junk.pt")
    blob = torch.load(path, weights_only=True)
    blob["version"] = 99
    torch.save(blob, tmp_path / "v99.pt")
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path / "v99.pt")


def test_parameters_finite_after_training(trained):
    assert all(bool(torch.isfinite(p.detach()).all()) for p in trained.parameters())
