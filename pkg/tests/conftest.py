import sys, pathlib
sys.path.append(str(pathlib.Path(__file__).resolve().parents[1]))
