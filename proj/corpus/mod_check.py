def modCheck(x: int) -> int:
    r = x % 3
    if r == 0:
        return 1
    return 0
