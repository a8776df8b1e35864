import pathlib

SAMPLES = pathlib.Path(__file__).resolve().parent.parent / "samples"
