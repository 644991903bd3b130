"""Exercise the layoutforge_py bindings end to end on a small corpus."""

import json
import pathlib
import sys
import tempfile

import layoutforge_py as lf

SAMPLE = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "data" / "sample"


def main():
    # composed and decomposed o-kar normalize to the same letter
    assert lf.normalize_text("ো".encode()) == "ো"

    text = "\n".join(p.read_text(encoding="utf-8") for p in sorted(SAMPLE.glob("*.txt")))
    stream = lf.tokenize(text)
    assert stream.letter_count > 0

    mono = lf.count_ngrams(stream, 1)
    di = lf.count_ngrams(stream, 2)
    assert sum(c for _, c in mono.items()) == mono.total_letters == stream.letter_count

    ranked = lf.ranked_monograms(mono)
    top = [letter for letter, _, _ in ranked[:4]]
    seeded = lf.initialize(mono)
    assert seeded.right == [top[0], top[3]] and seeded.left == [top[1], top[2]]

    part = lf.partition_all(mono, di)
    assert len(part.left) + len(part.right) == len(mono)
    assert not set(part.left) & set(part.right)

    layout = lf.build_layout(part, mono)
    again = lf.KeyboardLayout.from_json(layout.to_json())
    assert again.to_json() == layout.to_json()
    for letter in part.left:
        assert layout.hand_of(letter) == "left"

    report = lf.evaluate(layout, stream)
    assert report.left_load + report.right_load + report.not_determined == report.total_letters
    baseline = lf.EvaluationReport("baseline", report.hand_switching + 1, 1, 1, report.total_letters - 2)
    table = lf.compare([report, baseline])
    assert table.splitlines()[2].startswith("baseline")

    try:
        lf.initialize(lf.count_ngrams(lf.tokenize("কখগ"), 1))
    except lf.LayoutforgeError as e:
        assert "3" in str(e)
    else:
        raise AssertionError("three letters should not seed a partition")

    with tempfile.TemporaryDirectory() as out:
        rendered = lf.run_all(sorted(str(p) for p in SAMPLE.glob("*.txt")), out)
        assert "optimized" in rendered
        saved = json.loads((pathlib.Path(out) / "layout.json").read_text(encoding="utf-8"))
        assert len(saved["keys"]) == len(layout)

    print(f"ok: {stream.letter_count} letters, {len(part.left)} left / {len(part.right)} right, "
          f"{report.hand_switching} switches")
    return 0


if __name__ == "__main__":
    sys.exit(main())
