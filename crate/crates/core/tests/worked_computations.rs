mod displays;

#[test]
fn first_move_displays() {
    displays::first_move_displays();
}

#[test]
fn second_move_displays() {
    displays::second_move_displays();
}

#[test]
fn third_move_displays() {
    displays::third_move_displays();
}

#[test]
fn lemma_two_expansions() {
    displays::lemma_two_expansions();
}
