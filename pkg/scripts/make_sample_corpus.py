#!/usr/bin/env python3
"""Regenerate src/lexplain/data/sample/sample.vert.

The sample corpus is built from sentence templates with explicit repeat
counts, chosen so that the word sketches of "bone" (noun), "dead"
(adjective) and "break" (verb) rank a known set of collocates on top.

Token notation: ``word/TAG`` (lemma = lower-cased word) or ``word|lemma/TAG``.
"""

import sys
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "lexplain" / "data" / "sample" / "sample.vert"

NOUN = [
    # coordination: tooth, joint, muscle
    (4, "The bone/NN and/CC tooth/NN ."),
    (3, "A bone/NN or/CC joint/NN ."),
    (2, "Muscle|muscle/NN and/CC bone/NN ."),
    # hypernyms: tissue, fracture, calcium
    (4, "Tissues|tissue/NNS such/JJ as/IN bone/NN ."),
    (3, "The bone/NN and/CC other/JJ fractures|fracture/NNS ."),
    (2, "Bone|bone/NN and/CC other/JJ calcium/NN ."),
    # hyponyms: femur, vertebra
    (3, "Bones|bone/NNS such/JJ as/IN the/DT femur/NN ."),
    (2, "Bones|bone/NNS ,/, for/IN example/NN ,/, vertebra/NN ."),
    # meronyms: marrow, skull, joint / skull, tooth
    (4, "The bone/NN has|have/VBZ marrow/NN ."),
    (3, "The bone/NN has|have/VBZ a/DT skull/NN ."),
    (2, "A bone/NN has|have/VBZ a/DT joint/NN ."),
    (3, "The bone/NN contains|contain/VBZ the/DT skull/NN ."),
    (2, "The bone/NN contains|contain/VBZ a/DT tooth/NN ."),
    # holonyms: tissue, osteoporosis
    (3, "The tissue/NN contains|contain/VBZ bone/NN ."),
    (2, "Osteoporosis|osteoporosis/NN contains|contain/VBZ bone/NN ."),
    # adjective modifiers: bare, pubic, brittle
    (4, "A bare/JJ bone/NN ."),
    (3, "The pubic/JJ bone/NN ."),
    (2, "A brittle/JJ bone/NN ."),
    # verbs with bone as subject: fragment, heal, fracture
    (4, "Bones|bone/NNS fragment/VBP ."),
    (3, "Bones|bone/NNS heal/VBP ."),
    (2, "Bones|bone/NNS fracture/VBP ."),
    # verbs with bone as object: break, strengthen, fracture
    (5, "They/PRP break/VBP a/DT bone/NN ."),
    (4, "They/PRP strengthen/VBP the/DT bone/NN ."),
    (3, "They/PRP fracture/VBP a/DT bone/NN ."),
    # genitive: contention, skull, spine
    (4, "A bone/NN of/IN contention/NN ."),
    (3, "The bone/NN of/IN the/DT skull/NN ."),
    (2, "The bone/NN of/IN the/DT spine/NN ."),
    # instrumental: flesh, marrow, meat
    (4, "A bone/NN with/IN flesh/NN ."),
    (3, "A bone/NN with/IN marrow/NN ."),
    (2, "A bone/NN with/IN meat/NN ."),
]

# Contexts shared by bone and its thesaurus neighbours.  Each neighbour
# shares a prefix of this list with bone; longer prefix, higher similarity.
SHARED = [
    "human/JJ {n}",
    "healthy/JJ {n}",
    "damaged/JJ {n}",
    "weak/JJ {n}",
    "They/PRP examine/VBP the/DT {n}",
    "They/PRP scan/VBP the/DT {n}",
]
NEIGHBOURS = [
    ("osteoporosis/NN", 6),
    ("skull/NN", 5),
    ("spine/NN", 4),
    ("injury/NN", 3),
    ("remains|remain/NNS", 2),
]

ADJECTIVE = [
    # opposites of dead
    (3, "It/PRP is|be/VBZ dead/JJ ,/, not/RB alive/JJ ."),
    (2, "It/PRP was|be/VBD dead/JJ and/CC not/RB buried/JJ ."),
    # pointing
    (3, "It/PRP is|be/VBZ dead/JJ as/IN a/DT doornail/NN ."),
    (2, "It/PRP is|be/VBZ dead/JJ as/IN a/DT dodo/NN ."),
    # nouns described by dead
    (3, "The/DT dead/JJ body/NN ."),
    (2, "A/DT dead/JJ leaf/NN ."),
    # thesaurus neighbours of dead
    (2, "It/PRP is|be/VBZ lifeless/JJ ,/, not/RB alive/JJ ."),
    (2, "It/PRP is|be/VBZ lifeless/JJ as/IN a/DT doornail/NN ."),
    (2, "He/PRP was|be/VBD deceased/JJ ,/, not/RB alive/JJ ."),
    (2, "He/PRP was|be/VBD deceased/JJ and/CC not/RB buried/JJ ."),
    (2, "He/PRP was|be/VBD deceased/JJ as/IN a/DT dodo/NN ."),
]

VERB = [
    # subjects of break
    (3, "The/DT glass/NN breaks|break/VBZ ."),
    (2, "The/DT window/NN breaks|break/VBZ ."),
    # objects of break (besides bone)
    (3, "They/PRP break/VBP the/DT law/NN ."),
    (2, "They/PRP break/VBP the/DT glass/NN ."),
    # adverbs
    (3, "It/PRP may/MD break/VB easily/RB ."),
    (2, "It/PRP suddenly/RB broke|break/VBD ."),
    # prepositional phrases
    (3, "It/PRP broke|break/VBD into/IN pieces|piece/NNS ."),
    (2, "They/PRP break/VBP through/IN the/DT wall/NN ."),
    # thesaurus neighbours of break
    (2, "It/PRP may/MD shatter/VB easily/RB ."),
    (2, "It/PRP shattered|shatter/VBD into/IN pieces|piece/NNS ."),
    (2, "It/PRP shattered|shatter/VBD through/IN the/DT wall/NN ."),
    (2, "It/PRP may/MD crack/VB easily/RB ."),
    (2, "It/PRP cracked|crack/VBD into/IN pieces|piece/NNS ."),
]


DEFAULT_TAGS = {"the": "DT", "a": "DT", "they": "PRP", "it": "PRP", "he": "PRP",
                ".": ".", ",": ","}


def token(text: str) -> str:
    if "/" not in text or text.endswith("/"):
        tag = DEFAULT_TAGS.get(text.lower())
        if tag is None:
            raise ValueError(f"untagged token {text!r}")
        text = f"{text}/{tag}"
    form, _, tag = text.rpartition("/")
    word, _, lemma = form.partition("|")
    return f"{word}\t{lemma or word.lower()}\t{tag}"


def sentence(text: str) -> list[str]:
    return ["<s>"] + [token(t) for t in text.split()] + ["</s>"]


def build() -> list[str]:
    lines = []
    for doc_id, block in (("noun", NOUN), ("adjective", ADJECTIVE), ("verb", VERB)):
        lines.append(f'<doc id="{doc_id}">')
        for count, text in block:
            for _ in range(count):
                lines.extend(sentence(text))
        if doc_id == "noun":
            for k, ctx in enumerate(SHARED):
                for _ in range(2):
                    lines.extend(sentence(ctx.format(n="bone/NN") + " ."))
            for noun, n_shared in NEIGHBOURS:
                for ctx in SHARED[:n_shared]:
                    for _ in range(2):
                        lines.extend(sentence(ctx.format(n=noun) + " ."))
        lines.append("</doc>")
    return lines


def main(argv=None):
    out = Path(argv[0]) if argv else OUT
    out.write_text("\n".join(build()) + "\n", encoding="utf-8")
    print(f"wrote {out}", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1:])
