"""Generate the bundled Bangla sample corpus used by the determinism tests.

Words are drawn with Zipf-like weights from a fixed list of common words and
grouped into sentences ending in a danda. Output is fully determined by SEED.
"""
import random
import sys
from pathlib import Path

SEED = 20061
WORDS = """
এবং করে হয় একটি এই তার থেকে না করা জন্য সে তিনি আমি আমার তোমার আমরা তারা
কিন্তু যে এক কথা বলে বলেন হবে ছিল ছিলেন পর মধ্যে সঙ্গে নিয়ে দিয়ে কোন কি কী
বাংলা ভাষা দেশ মানুষ সময় কাজ দিন রাত বছর মাস সকাল বিকেল সন্ধ্যা জীবন সমাজ
শিক্ষা বিদ্যালয় ছাত্র শিক্ষক বই পড়া লেখা গান কবিতা গল্প উপন্যাস নাটক সাহিত্য
নদী পাহাড় আকাশ বাতাস মাটি জল গাছ ফুল পাখি মাছ ধান চাল খাবার ঘর বাড়ি গ্রাম শহর
রাস্তা বাজার দোকান টাকা সরকার রাজনীতি অর্থনীতি বিজ্ঞান প্রযুক্তি কম্পিউটার তথ্য
মন প্রাণ ভালোবাসা স্বপ্ন আশা দুঃখ সুখ আনন্দ ভয় রাগ হাসি কান্না চোখ মুখ হাত পা
মা বাবা ভাই বোন ছেলে মেয়ে বন্ধু পরিবার আত্মীয় প্রতিবেশী অতিথি
বড় ছোট নতুন পুরনো সুন্দর ভালো খারাপ সহজ কঠিন অনেক কম বেশি সব প্রায় খুব আরও
যায় আসে দেখে শোনে খায় ঘুমায় জাগে চলে থাকে রাখে দেয় নেয় পায় চায় জানে বোঝে
গেল এল দেখল শুনল বলল করল পেল দিল নিল থাকল চলল লিখল পড়ল ভাবল
কারণ তাই যদি তবে তখন এখন আজ কাল পরে আগে সেখানে এখানে কোথায় কেন কেমন কখন
প্রথম দ্বিতীয় তৃতীয় শেষ মাঝে উপরে নিচে ভিতরে বাইরে সামনে পিছনে পাশে কাছে দূরে
স্বাধীনতা মুক্তিযুদ্ধ ইতিহাস ঐতিহ্য সংস্কৃতি উৎসব বৈশাখ বর্ষা শরৎ হেমন্ত শীত বসন্ত
চিঠি খবর কাগজ পত্রিকা সংবাদ প্রশ্ন উত্তর সমস্যা সমাধান উন্নয়ন পরিবর্তন সম্ভাবনা
ঔষধ ডাক্তার হাসপাতাল রোগ স্বাস্থ্য ঋতু ঐক্য ঊষা ঈদ ইচ্ছা উঠান ঢাকা চট্টগ্রাম
ঝড় ঝরনা ঠাকুর ঢোল ণত্ব ফল ফসল ভোর ভাত যুগ যুদ্ধ শান্তি ষড়ঋতু হৃদয় ক্ষমা জ্ঞান
""".split()
SENTENCES = [
    "আমার সোনার বাংলা আমি তোমায় ভালোবাসি।",
    "চিরদিন তোমার আকাশ তোমার বাতাস আমার প্রাণে বাজায় বাঁশি।",
    "ভাষা আন্দোলনের ইতিহাস আমাদের জাতীয় জীবনের গৌরবময় অধ্যায়।",
    "বর্ষাকালে নদীর জল বেড়ে যায় এবং মাঠ সবুজ ধানে ভরে ওঠে।",
]


def main(out_dir: Path, parts: int = 3, target_bytes: int = 50_000) -> None:
    rng = random.Random(SEED)
    weights = [1.0 / (i + 1) ** 0.9 for i in range(len(WORDS))]
    chunks = []
    size = 0
    while size < target_bytes:
        if rng.random() < 0.08:
            sentence = rng.choice(SENTENCES)
        else:
            n = rng.randint(4, 12)
            sentence = " ".join(rng.choices(WORDS, weights, k=n)) + "।"
        chunks.append(sentence)
        size += len(sentence.encode("utf-8")) + 1
    per = len(chunks) // parts + 1
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(parts):
        body = chunks[i * per:(i + 1) * per]
        lines = [" ".join(body[j:j + 4]) for j in range(0, len(body), 4)]
        (out_dir / f"part{i + 1}.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("crates/core/data/sample"))
