#!/usr/bin/env python3
# Copyright 2026 The thunder-tok Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds the Korean fixture corpora under tests/data.

Public-domain statute text (the Korean constitution and ten National
Assembly bills, as shipped with KoNLPy) is mixed with sentences from a small
seeded grammar. The output is deterministic for a given --seed.

  python3 tools/make_fixture.py --kolaw DIR --kobill DIR --out tests/data
"""

import argparse
import pathlib
import random
import re

HANGUL_BASE = 0xAC00
RIEUL = 8


def batchim(syllable):
    code = ord(syllable) - HANGUL_BASE
    if not 0 <= code < 11172:
        return 0
    return code % 28


def with_batchim(syllable, final):
    code = ord(syllable) - HANGUL_BASE
    return chr(HANGUL_BASE + code - code % 28 + final)


def particle(noun, closed, open_):
    """Picks the allomorph that follows `noun`."""
    return noun + (closed if batchim(noun[-1]) else open_)


def topic(n):
    return particle(n, "은", "는")


def subject(n):
    return particle(n, "이", "가")


def obj(n):
    return particle(n, "을", "를")


def with_(n):
    return particle(n, "과", "와")


def toward(n):
    last = batchim(n[-1])
    return n + ("으로" if last and last != RIEUL else "로")


def copula(n, style):
    if style == "formal":
        return n + "입니다"
    return n + ("이에요" if batchim(n[-1]) else "예요")


class Verb:
    def __init__(self, stem, yo, past, adjective=False):
        self.stem, self.yo, self.past = stem, yo, past
        self.adjective = adjective

    def formal(self, question=False):
        end = "니까" if question else "니다"
        last = batchim(self.stem[-1])
        if last == 0:
            return self.stem[:-1] + with_batchim(self.stem[-1], 17) + end
        if last == RIEUL:
            return self.stem[:-1] + with_batchim(self.stem[-1], 17) + end
        return self.stem + "습" + end

    def plain(self):
        if self.adjective:
            return self.stem + "다"
        last = batchim(self.stem[-1])
        if last == 0:
            return self.stem[:-1] + with_batchim(self.stem[-1], 4) + "다"
        if last == RIEUL:
            return self.stem[:-1] + with_batchim(self.stem[-1], 4) + "다"
        return self.stem + "는다"

    def adnominal(self):
        if batchim(self.stem[-1]) == RIEUL:
            return self.stem[:-1] + with_batchim(self.stem[-1], 0) + "는"
        return self.stem + "는"

    def past_formal(self):
        return self.past + "습니다"

    def past_yo(self):
        return self.past + "어요"

    def connective(self, kind):
        if kind == "go":
            return self.stem + "고"
        if kind == "jiman":
            return self.stem + "지만"
        return self.yo[:-1] + "서"

    def final(self, rng, question=False):
        if question:
            return rng.choice([self.formal(True), self.yo, self.past + "어요"])
        return rng.choice([self.formal(), self.formal(), self.yo, self.plain(),
                           self.past_formal(), self.past_yo()])


TRANSITIVE = [
    Verb("먹", "먹어요", "먹었"), Verb("읽", "읽어요", "읽었"),
    Verb("만들", "만들어요", "만들었"), Verb("보", "봐요", "봤"),
    Verb("배우", "배워요", "배웠"), Verb("사", "사요", "샀"),
    Verb("찾", "찾아요", "찾았"), Verb("기다리", "기다려요", "기다렸"),
    Verb("준비하", "준비해요", "준비했"), Verb("공부하", "공부해요", "공부했"),
    Verb("확인하", "확인해요", "확인했"), Verb("좋아하", "좋아해요", "좋아했"),
    Verb("쓰", "써요", "썼"), Verb("듣", "들어요", "들었"),
    Verb("받", "받아요", "받았"), Verb("열", "열어요", "열었"),
    Verb("팔", "팔아요", "팔았"), Verb("마시", "마셔요", "마셨"),
    Verb("정리하", "정리해요", "정리했"), Verb("발표하", "발표해요", "발표했"),
    Verb("검토하", "검토해요", "검토했"), Verb("소개하", "소개해요", "소개했"),
    Verb("사용하", "사용해요", "사용했"), Verb("설명하", "설명해요", "설명했"),
    Verb("걸", "걸어요", "걸었"), Verb("입", "입어요", "입었"),
]
INTRANSITIVE = [
    Verb("가", "가요", "갔"), Verb("오", "와요", "왔"),
    Verb("일하", "일해요", "일했"), Verb("쉬", "쉬어요", "쉬었"),
    Verb("살", "살아요", "살았"), Verb("놀", "놀아요", "놀았"),
    Verb("출발하", "출발해요", "출발했"), Verb("도착하", "도착해요", "도착했"),
    Verb("운동하", "운동해요", "운동했"), Verb("이야기하", "이야기해요", "이야기했"),
    Verb("웃", "웃어요", "웃었"), Verb("자", "자요", "잤"),
    Verb("앉", "앉아요", "앉았"), Verb("시작하", "시작해요", "시작했"),
]
ADJECTIVES = [
    Verb("좋", "좋아요", "좋았", True), Verb("많", "많아요", "많았", True),
    Verb("작", "작아요", "작았", True), Verb("넓", "넓어요", "넓었", True),
    Verb("바쁘", "바빠요", "바빴", True), Verb("조용하", "조용해요", "조용했", True),
    Verb("따뜻하", "따뜻해요", "따뜻했", True), Verb("중요하", "중요해요", "중요했", True),
    Verb("어렵", "어려워요", "어려웠", True), Verb("비싸", "비싸요", "비쌌", True),
    Verb("깨끗하", "깨끗해요", "깨끗했", True), Verb("재미있", "재미있어요", "재미있었", True),
    Verb("길", "길어요", "길었", True), Verb("멀", "멀어요", "멀었", True),
]

PEOPLE = ["학생", "선생님", "친구", "동생", "어머니", "아버지", "할머니", "의사",
          "기자", "회사원", "연구원", "가수", "작가", "이웃", "손님", "아이들",
          "우리", "저", "민수", "지영", "영희", "철수", "팀장님", "교수님"]
PLACES = ["학교", "도서관", "회사", "시장", "공원", "식당", "병원", "서울",
          "부산", "제주도", "카페", "집", "사무실", "교실", "영화관", "박물관",
          "역", "공항", "백화점", "편의점", "운동장", "강당", "은행", "우체국"]
THINGS = ["책", "밥", "커피", "사과", "편지", "신문", "영화", "음악", "사진",
          "옷", "가방", "컴퓨터", "전화", "숙제", "보고서", "계획", "자료",
          "문제", "음식", "선물", "우유", "빵", "김치", "라면", "노래", "소설",
          "지도", "표", "시험", "회의", "발표", "규칙", "법률", "예산", "정책",
          "영어 사전", "한국어 교재", "점심 메뉴", "여행 일정", "수업 자료"]
TIMES = ["오늘", "어제", "내일", "아침에", "저녁에", "주말에", "요즘",
         "지난주에", "다음 달에", "매일", "가끔", "점심 시간에", "방학 동안",
         "오후에", "새벽에", "올해"]
ADVERBS = ["정말", "아주", "조금", "빨리", "천천히", "함께", "다시", "벌써",
           "아직", "열심히", "같이", "혼자", "많이", "잘", "먼저", "꼭"]
COUNTERS = ["개", "명", "권", "잔", "번", "시간", "분", "살", "층", "장"]
LATIN = ["AI", "Python", "email", "PDF", "Wi-Fi", "K-pop", "USB", "OK"]
CONNECT = ["그래서", "그리고", "하지만", "그런데", "그러면", "또한", "따라서"]


def noun_phrase(rng):
    if rng.random() < 0.25:
        return rng.choice(TRANSITIVE).adnominal() + " " + rng.choice(THINGS)
    return rng.choice(THINGS)


def number_phrase(rng):
    return f"{rng.randint(1, 30)}{rng.choice(COUNTERS)}"


def sentence(rng):
    t = rng.randrange(14)
    q = rng.random() < 0.15
    mark = "?" if q else rng.choice([".", ".", ".", ".", "!"])
    person = rng.choice(PEOPLE)
    place = rng.choice(PLACES)
    thing = noun_phrase(rng)
    vt = rng.choice(TRANSITIVE)
    vi = rng.choice(INTRANSITIVE)
    adj = rng.choice(ADJECTIVES)
    time = rng.choice(TIMES)
    adv = rng.choice(ADVERBS)
    if t == 0:
        words = [time, topic(person), place + "에서", obj(thing), vt.final(rng, q)]
    elif t == 1:
        words = [topic(person), toward(place), adv, vi.final(rng, q)]
    elif t == 2:
        words = [place + "의", topic(thing), adv, adj.final(rng, q)]
    elif t == 3:
        words = [topic(person), obj(thing), vt.connective("go"), toward(place),
                 vi.final(rng, q)]
    elif t == 4:
        words = [time, subject(person), number_phrase(rng), obj(thing),
                 vt.final(rng, q)]
    elif t == 5:
        words = [topic(thing), adj.connective("jiman"), subject(person),
                 adv, vt.final(rng, q)]
    elif t == 6:
        words = [topic(person), with_(rng.choice(PEOPLE)), place + "에서",
                 vi.final(rng, q)]
    elif t == 7:
        words = [topic(thing), copula(rng.choice(THINGS), rng.choice(["formal", "yo"]))]
        mark = "."
    elif t == 8:
        words = [rng.choice(CONNECT), topic(person), time, place + "에",
                 vi.connective("seo"), obj(thing), vt.final(rng, q)]
    elif t == 9:
        words = [f"{rng.randint(1990, 2030)}년", f"{rng.randint(1, 12)}월에",
                 topic(person), obj(thing), vt.past_formal()]
        mark = "."
    elif t == 10:
        words = [topic(person), rng.choice(LATIN) + "로", obj(thing), vt.final(rng, q)]
    elif t == 11:
        words = [vt.adnominal(), topic(person), adv, adj.final(rng, q)]
    elif t == 12:
        words = [time, topic(place), adv, adj.final(rng, q)]
    else:
        words = [topic(person), f"{rng.randint(1, 12)}시에", toward(place),
                 vi.final(rng, q)]
    return " ".join(words) + mark


def synthetic_lines(rng, target_bytes):
    lines, size = [], 0
    while size < target_bytes:
        n = rng.choice([1, 1, 2, 2, 3])
        line = " ".join(sentence(rng) for _ in range(n))
        lines.append(line)
        size += len(line.encode()) + 1
    return lines


def statute_lines(path):
    """Paragraphs of a statute file with wrapped lines rejoined."""
    text = path.read_text(encoding="utf-8")
    out = []
    for block in re.split(r"\n\s*\n", text):
        line = re.sub(r"\s+", " ", block).strip()
        if not line or re.fullmatch(r"[-\s\d]+", line):
            continue
        if len(re.findall(r"[-─]", line)) > len(line) // 3:
            continue
        if not re.search(r"[가-힣]", line):
            continue
        out.append(line)
    return out


def split_sentences(line):
    parts = re.split(r"(?<=[.?!])\s+", line)
    return [p for p in parts if p]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kolaw", type=pathlib.Path, required=True)
    parser.add_argument("--kobill", type=pathlib.Path, required=True)
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path("tests/data"))
    parser.add_argument("--seed", type=int, default=20240917)
    parser.add_argument("--train-bytes", type=int, default=500_000)
    parser.add_argument("--heldout-bytes", type=int, default=60_000)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    real_train, real_heldout = [], []
    for line in statute_lines(args.kolaw / "constitution.txt"):
        for s in split_sentences(line):
            (real_heldout if rng.random() < 0.12 else real_train).append(s)
    bills = sorted(args.kobill.glob("*.txt"))
    for i, path in enumerate(bills):
        target = real_heldout if i == len(bills) - 1 else real_train
        for line in statute_lines(path):
            target.extend(split_sentences(line))

    def fill(real, target_bytes, synth_rng):
        size = sum(len(s.encode()) + 1 for s in real)
        lines = real + synthetic_lines(synth_rng, target_bytes - size)
        synth_rng.shuffle(lines)
        return lines

    train = fill(real_train, args.train_bytes, random.Random(args.seed + 1))
    heldout = fill(real_heldout, args.heldout_bytes, random.Random(args.seed + 2))
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "ko_train.txt").write_text("\n".join(train) + "\n", encoding="utf-8")
    (args.out / "ko_heldout.txt").write_text("\n".join(heldout) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
