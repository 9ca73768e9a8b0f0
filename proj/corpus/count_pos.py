def countPos(n: list[int]) -> int:
    c = 0
    for i in range(len(n)):
        if n[i] > 0:
            c = c + 1
    return c
