"""Synthetic description/code corpora for desk-scale experiments.

Identifiers are camel-case compounds of English words; their semantics are
the concatenated Chinese glosses. Held-out identifiers contain at least one
word that no training identifier uses, so a model can only learn them from
the semantic table.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .augment import SemanticEntry
from .prep.corpus import CATEGORIES, Example

COMMON_WORDS = {
    "pic": "图片", "url": "链接", "shop": "店铺", "logo": "标志", "room": "房间", "status": "状态",
    "title": "标题", "price": "价格", "live": "直播", "time": "时间", "desc": "描述", "user": "用户",
    "name": "名称", "nick": "昵称", "coin": "金币", "item": "商品", "count": "数量", "total": "总计",
    "sale": "销售", "start": "开始", "end": "结束", "date": "日期", "tag": "标签", "text": "文本",
    "icon": "图标", "level": "等级", "score": "分数", "rank": "排名", "city": "城市", "order": "订单",
    "pay": "支付", "card": "卡片", "gift": "礼物", "task": "任务", "btn": "按钮", "tip": "提示",
    "color": "颜色", "type": "类型", "new": "最新", "main": "主要",
}
RARE_WORDS = {
    "train": "火车", "ticket": "车票", "hotel": "酒店", "flight": "航班", "seat": "座位", "coupon": "优惠",
    "member": "会员", "vip": "贵宾", "stock": "库存", "brand": "品牌", "video": "视频", "music": "音乐",
    "book": "图书", "star": "星级", "weather": "天气", "mall": "商场", "voice": "语音", "map": "地图",
    "road": "道路", "family": "家庭",
}
LITERALS = ["暂无", "元", "春运火车票", "已售罄", "人已购买", "免费", "热卖中", "敬请期待", "件", "起",
            "限时", "包邮", "新品", "秒杀", "满减"]

# description template, code template; slots: {A} {B} {X} identifiers, {L} {M} literals, {N} digit
TEMPLATES = {
    "STE": [
        ("展示{A}，后面加上'{L}'", "`${{{a}}}{L}`"),
        ("展示'{L}'加{A}", "'{L}' + {a}"),
        ("显示'{L}'+{A}+'{M}'", "`{L}${{{a}}}{M}`"),
    ],
    "OLE": [
        ("展示{A}，兜底显示'{L}'", "{a} || '{L}'"),
        ("展示{A}，没有则展示{B}", "{a} || {b}"),
        ("优先展示{A}，其次{B}，兜底'{L}'", "{a} || {b} || '{L}'"),
    ],
    "CE": [
        ("如果{X}成立则展示{A}，否则展示{B}", "{x} ? {a} : {b}"),
        ("如果{X}则显示'{L}'，否则显示'{M}'", "{x} ? '{L}' : '{M}'"),
        ("{X}等于'{L}'时展示{A}，否则展示{B}", "{x} === '{L}' ? {a} : {b}"),
    ],
    "DPE": [
        ("取{A}按'{L}'分割后的第{N}项", "{a}.split('{L}')[{N}]"),
        ("展示{A}的前{N}个字符", "{a}.substring(0, {N})"),
        ("{A}保留{N}位小数", "{a}.toFixed({N})"),
    ],
}


@dataclass
class SyntheticSpec:
    counts: dict[str, int] = field(default_factory=lambda: {c: 75 for c in CATEGORIES})
    table_size: int = 500
    heldout: int = 50
    train_names: int = 150
    member_prefix_rate: float = 0.5
    seed: int = 0


@dataclass
class SyntheticCorpus:
    train: list[Example]
    test: list[Example]
    table: list[SemanticEntry]
    heldout: list[str]


def _camel(words: tuple[str, ...]) -> str:
    return words[0] + "".join(w[0].upper() + w[1:] for w in words[1:])


def _entry(words: tuple[str, ...]) -> SemanticEntry:
    gloss = {**COMMON_WORDS, **RARE_WORDS}
    return SemanticEntry(_camel(words), "".join(gloss[w] for w in words))


def _compounds(rng: random.Random, pool: list[str], n: int, must: list[str] | None, taken: set) -> list[tuple]:
    out, tries = [], 0
    while len(out) < n:
        tries += 1
        if tries > 200 * (n + 10):
            raise ValueError(f"word pool too small for {n} distinct identifiers")
        words = [rng.choice(pool) for _ in range(rng.choice((2, 2, 3)))]
        if must is not None:
            words[rng.randrange(len(words))] = rng.choice(must)
        if len(set(words)) < len(words):
            continue
        name = _camel(tuple(words))
        if name in taken:
            continue
        taken.add(name)
        out.append(tuple(words))
    return out


def build_table(spec: SyntheticSpec, rng: random.Random):
    """(table, training identifiers, held-out identifiers)."""
    if spec.train_names + spec.heldout > spec.table_size:
        raise ValueError("semantic table smaller than training plus held-out identifiers")
    common, rare = sorted(COMMON_WORDS), sorted(RARE_WORDS)
    taken: set[str] = set()
    train = _compounds(rng, common, spec.train_names, None, taken)
    heldout = _compounds(rng, common, spec.heldout, rare, taken)
    filler = _compounds(rng, common + rare, spec.table_size - len(train) - len(heldout), None, taken)
    table = [_entry(w) for w in train + heldout + filler]
    rng.shuffle(table)
    return table, [_entry(w) for w in train], [_entry(w) for w in heldout]


def _instantiate(rng: random.Random, category: str, names: list[SemanticEntry], prefix_rate: float,
                 forced: SemanticEntry | None = None, tag: bool = True) -> Example:
    desc_t, code_t = rng.choice(TEMPLATES[category])
    slots = [s for s in ("A", "B", "X") if "{" + s + "}" in desc_t]
    picked = rng.sample(names, len(slots))
    if forced is not None:
        picked = [e for e in picked if e.name != forced.name][:len(slots)]
        picked[rng.randrange(len(slots))] = forced
    lits = rng.sample(LITERALS, 2)
    fill_desc = {"L": lits[0], "M": lits[1], "N": str(rng.randint(1, 5))}
    fill_code = dict(fill_desc)
    for slot, e in zip(slots, picked):
        fill_desc[slot] = e.semantic
        fill_code[slot.lower()] = ("data." if rng.random() < prefix_rate else "") + e.name
    for slot in ("a", "b", "x"):
        fill_code.setdefault(slot, "")
    return Example(desc_t.format(**fill_desc), "{" + code_t.format(**fill_code) + ";}", category if tag else None)


def generate(spec: SyntheticSpec) -> SyntheticCorpus:
    """Raw (unpreprocessed) training and test corpora plus the semantic table.

    Each test example uses exactly one held-out identifier; training
    examples use training identifiers only. Only test examples carry
    category tags.
    """
    rng = random.Random(spec.seed)
    table, train_names, heldout = build_table(spec, rng)
    if len(train_names) < 3:
        raise ValueError("need at least three training identifiers")
    train = [_instantiate(rng, cat, train_names, spec.member_prefix_rate, tag=False)
             for cat in CATEGORIES for _ in range(spec.counts.get(cat, 0))]
    rng.shuffle(train)
    test = [_instantiate(rng, CATEGORIES[i % len(CATEGORIES)], train_names, spec.member_prefix_rate, forced=e)
            for i, e in enumerate(heldout)]
    return SyntheticCorpus(train, test, table, [e.name for e in heldout])
