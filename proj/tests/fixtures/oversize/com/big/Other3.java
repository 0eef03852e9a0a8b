package com.big;

public class Other3 {

    public String other3OperationNumber000(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber001(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber002(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber003(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber004(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber005(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber006(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber007(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber008(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber009(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber010(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber011(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber012(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber013(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber014(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber015(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber016(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber017(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber018(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber019(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber020(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber021(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber022(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber023(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber024(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber025(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber026(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber027(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber028(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber029(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber030(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber031(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber032(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber033(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber034(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber035(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber036(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber037(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber038(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber039(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber040(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber041(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber042(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber043(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber044(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber045(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber046(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber047(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber048(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber049(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber050(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber051(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber052(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber053(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber054(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber055(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber056(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber057(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber058(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber059(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber060(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber061(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber062(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber063(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber064(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber065(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber066(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber067(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber068(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber069(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber070(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber071(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber072(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber073(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber074(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber075(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber076(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber077(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber078(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber079(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber080(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber081(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber082(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber083(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber084(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber085(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber086(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber087(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber088(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber089(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber090(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber091(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber092(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber093(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber094(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber095(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber096(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber097(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber098(String firstArgument, int secondArgument) {
        return "";
    }

    public String other3OperationNumber099(String firstArgument, int secondArgument) {
        return "";
    }
}
